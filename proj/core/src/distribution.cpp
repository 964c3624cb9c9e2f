#include "renewal/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "law.hpp"

namespace renewal {
namespace detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ModelError(msg);
}

Poly poly_from_linear_factors(const std::vector<double>& roots_as_lambda) {
    // product of (lambda_i - z)
    Poly p{{1.0}};
    for (double lam : roots_as_lambda) p = Poly::mul(p, Poly{{lam, -1.0}});
    return p;
}

Poly charpoly(const Eigen::MatrixXd& a) {
    // det(zI - a), monic, by Faddeev-LeVerrier.
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c[n] = 1.0;
    for (int k = 1; k <= n; ++k) {
        Eigen::MatrixXd am = a * m;
        double ck = -am.trace() / k;
        c[n - k] = ck;
        m = am + ck * Eigen::MatrixXd::Identity(n, n);
    }
    return Poly{std::move(c)};
}

} // namespace

Complex segment_moment_integral(int k, Complex s) {
    // E_k(s) = int_0^1 v^k e^{sv} dv. The series is reserved for |s| <= 1
    // (beyond that its alternating complex terms cancel catastrophically);
    // elsewhere the upward recursion from (e^s - 1)/s is stable.
    if (std::abs(s) <= 1.0) {
        Complex acc = 0.0;
        Complex term = 1.0; // s^j / j!
        for (int j = 0; j < 40; ++j) {
            Complex contrib = term / static_cast<double>(k + j + 1);
            acc += contrib;
            if (std::abs(contrib) < 1e-20 * (std::abs(acc) + 1e-30) && j > 4) break;
            term *= s / static_cast<double>(j + 1);
        }
        return acc;
    }
    Complex es = std::exp(s);
    Complex e = (es - 1.0) / s;
    for (int j = 1; j <= k; ++j) e = (es - static_cast<double>(j) * e) / s;
    return e;
}

void Law::check_not_pole(Complex z) const {
    for (Complex p : poles()) {
        if (std::abs(z - p) < 1e-12) {
            std::ostringstream os;
            os << name() << ": mgf evaluated at pole z=(" << z.real() << "," << z.imag() << ")";
            throw PoleEvaluation(os.str());
        }
    }
}

Complex Law::mgf(Complex z) const {
    check_not_pole(z);
    return num(z) / den(z);
}

Complex Law::mgf_derivative(Complex z, int order) const {
    if (order < 1 || order > 3) throw Error(name() + ": mgf_derivative order must be 1..3");
    check_not_pole(z);
    const Complex n0 = num(z), d0 = den(z);
    const Complex n1 = num_derivative(z, 1), d1 = den_derivative(z, 1);
    const Complex a = n1 * d0 - n0 * d1; // g' = a / d0^2
    if (order == 1) return a / (d0 * d0);
    const Complex n2 = num_derivative(z, 2), d2 = den_derivative(z, 2);
    const Complex ap = n2 * d0 - n0 * d2;
    if (order == 2) return (ap * d0 - 2.0 * a * d1) / (d0 * d0 * d0);
    const Complex n3 = num_derivative(z, 3), d3 = den_derivative(z, 3);
    const Complex app = n3 * d0 + n2 * d1 - n1 * d2 - n0 * d3;
    return (app * d0 * d0 - 4.0 * ap * d1 * d0 - 2.0 * a * d2 * d0 + 6.0 * a * d1 * d1) /
           (d0 * d0 * d0 * d0);
}

namespace {

// ---------------------------------------------------------------- exponential

class ExponentialLaw final : public Law {
public:
    explicit ExponentialLaw(double rate) : rate_(rate), poles_{Complex(rate, 0.0)} {
        require(rate > 0, "exponential: rate must be > 0");
    }

    Kind kind() const override { return Kind::exponential; }
    std::string name() const override { return "exponential"; }
    bool lattice() const override { return false; }
    double mgf_radius() const override { return rate_; }

    double raw_moment(int k) const override { return factorial(k) / std::pow(rate_, k); }

    Complex num(Complex) const override { return rate_; }
    Complex num_derivative(Complex, int) const override { return 0.0; }
    Complex den(Complex z) const override { return rate_ - z; }
    Complex den_derivative(Complex, int order) const override {
        return order == 1 ? Complex(-1.0) : Complex(0.0);
    }
    const std::vector<Complex>& poles() const override { return poles_; }

    double tail(double x) const override { return x <= 0 ? 1.0 : std::exp(-rate_ * x); }
    double density(double x) const override { return x < 0 ? 0.0 : rate_ * std::exp(-rate_ * x); }
    double sample(CounterRng& rng) const override { return rng.next_exponential(rate_); }

private:
    double rate_;
    std::vector<Complex> poles_;
};

// --------------------------------------------------------------------- erlang

class ErlangLaw final : public Law {
public:
    ErlangLaw(int shape, double rate)
        : shape_(shape), rate_(rate), poles_{Complex(rate, 0.0)} {
        require(shape >= 1, "erlang: shape must be >= 1");
        require(rate > 0, "erlang: rate must be > 0");
    }

    Kind kind() const override { return Kind::erlang; }
    std::string name() const override { return "erlang"; }
    bool lattice() const override { return false; }
    double mgf_radius() const override { return rate_; }

    double raw_moment(int k) const override {
        double v = 1.0;
        for (int i = 0; i < k; ++i) v *= (shape_ + i);
        return v / std::pow(rate_, k);
    }

    Complex num(Complex) const override { return std::pow(rate_, shape_); }
    Complex num_derivative(Complex, int) const override { return 0.0; }
    Complex den(Complex z) const override { return std::pow(rate_ - z, shape_); }
    Complex den_derivative(Complex z, int order) const override {
        double fall = 1.0;
        for (int i = 0; i < order; ++i) fall *= (shape_ - i);
        if (fall == 0.0) return 0.0;
        double sign = (order % 2 == 0) ? 1.0 : -1.0;
        return sign * fall * std::pow(rate_ - z, shape_ - order);
    }
    const std::vector<Complex>& poles() const override { return poles_; }

    double tail(double x) const override {
        if (x <= 0) return 1.0;
        double term = 1.0, acc = 1.0;
        for (int j = 1; j < shape_; ++j) {
            term *= rate_ * x / j;
            acc += term;
        }
        return std::exp(-rate_ * x) * acc;
    }
    double density(double x) const override {
        if (x < 0) return 0.0;
        return std::pow(rate_, shape_) * std::pow(x, shape_ - 1) *
               std::exp(-rate_ * x) / factorial(shape_ - 1);
    }
    double sample(CounterRng& rng) const override {
        double t = 0;
        for (int i = 0; i < shape_; ++i) t += rng.next_exponential(rate_);
        return t;
    }

private:
    int shape_;
    double rate_;
    std::vector<Complex> poles_;
};

// ----------------------------------------------------------- hyperexponential

class HyperexponentialLaw final : public Law {
public:
    HyperexponentialLaw(std::vector<double> w, std::vector<double> rates)
        : weights_(std::move(w)), rates_(std::move(rates)) {
        require(weights_.size() == rates_.size() && !weights_.empty(),
                "hyperexponential: weights and rates must have equal, nonzero size");
        double sum = 0;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            require(weights_[i] > 0, "hyperexponential: weights must be > 0");
            require(rates_[i] > 0, "hyperexponential: rates must be > 0");
            sum += weights_[i];
        }
        require(std::abs(sum - 1.0) < 1e-12, "hyperexponential: weights must sum to 1");

        den_poly_ = poly_from_linear_factors(rates_);
        num_poly_ = Poly{{0.0}};
        for (std::size_t i = 0; i < rates_.size(); ++i) {
            std::vector<double> others;
            for (std::size_t j = 0; j < rates_.size(); ++j)
                if (j != i) others.push_back(rates_[j]);
            Poly pi = poly_from_linear_factors(others);
            for (double& c : pi.c) c *= weights_[i] * rates_[i];
            num_poly_ = Poly::add(num_poly_, pi);
        }
        num_d_[0] = num_poly_;
        den_d_[0] = den_poly_;
        for (int k = 1; k <= 3; ++k) {
            num_d_[k] = num_d_[k - 1].derivative();
            den_d_[k] = den_d_[k - 1].derivative();
        }
        for (double r : rates_) poles_.emplace_back(r, 0.0);
    }

    Kind kind() const override { return Kind::hyperexponential; }
    std::string name() const override { return "hyperexponential"; }
    bool lattice() const override { return false; }
    double mgf_radius() const override { return *std::min_element(rates_.begin(), rates_.end()); }

    double raw_moment(int k) const override {
        double acc = 0;
        for (std::size_t i = 0; i < rates_.size(); ++i)
            acc += weights_[i] * factorial(k) / std::pow(rates_[i], k);
        return acc;
    }

    Complex num(Complex z) const override { return num_d_[0].eval(z); }
    Complex num_derivative(Complex z, int order) const override { return num_d_[order].eval(z); }
    Complex den(Complex z) const override { return den_d_[0].eval(z); }
    Complex den_derivative(Complex z, int order) const override { return den_d_[order].eval(z); }
    const std::vector<Complex>& poles() const override { return poles_; }

    double tail(double x) const override {
        if (x <= 0) return 1.0;
        double acc = 0;
        for (std::size_t i = 0; i < rates_.size(); ++i)
            acc += weights_[i] * std::exp(-rates_[i] * x);
        return acc;
    }
    double density(double x) const override {
        if (x < 0) return 0.0;
        double acc = 0;
        for (std::size_t i = 0; i < rates_.size(); ++i)
            acc += weights_[i] * rates_[i] * std::exp(-rates_[i] * x);
        return acc;
    }
    double sample(CounterRng& rng) const override {
        double u = rng.next_uniform(), cum = 0;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            cum += weights_[i];
            if (u <= cum || i + 1 == weights_.size()) return rng.next_exponential(rates_[i]);
        }
        return rng.next_exponential(rates_.back());
    }

private:
    std::vector<double> weights_, rates_;
    Poly num_poly_, den_poly_;
    Poly num_d_[4], den_d_[4];
    std::vector<Complex> poles_;
};

// --------------------------------------------------------- matrix exponential

class MatrixExponentialLaw final : public Law {
public:
    MatrixExponentialLaw(std::vector<double> alpha, std::vector<std::vector<double>> t)
        : alpha_raw_(std::move(alpha)) {
        const int n = static_cast<int>(alpha_raw_.size());
        require(n >= 1 && n <= 64, "matrix_exponential: dimension must be in 1..64");
        require(t.size() == alpha_raw_.size(), "matrix_exponential: T must be square, matching alpha");
        double asum = 0;
        for (double a : alpha_raw_) {
            require(a >= 0, "matrix_exponential: alpha entries must be >= 0");
            asum += a;
        }
        require(asum <= 1.0 + 1e-12, "matrix_exponential: alpha must sum to <= 1");
        atom0_ = std::max(0.0, 1.0 - asum);

        t_.resize(n, n);
        for (int i = 0; i < n; ++i) {
            require(static_cast<int>(t[i].size()) == n, "matrix_exponential: T must be square");
            double row = 0;
            for (int j = 0; j < n; ++j) {
                t_(i, j) = t[i][j];
                row += t[i][j];
                if (i == j)
                    require(t[i][j] < 0, "matrix_exponential: diagonal of T must be < 0");
                else
                    require(t[i][j] >= 0, "matrix_exponential: off-diagonal of T must be >= 0");
            }
            require(row <= 1e-12, "matrix_exponential: row sums of T must be <= 0");
        }
        alpha_.resize(n);
        for (int i = 0; i < n; ++i) alpha_(i) = alpha_raw_[i];
        s_ = -t_ * Eigen::VectorXd::Ones(n);

        Poly chi = charpoly(-t_);
        Poly chi2 = charpoly(s_ * alpha_.transpose() - t_);
        den_d_[0] = chi;
        Poly numer = Poly::sub(chi2, chi);
        if (atom0_ > 0) {
            Poly scaled = chi;
            for (double& c : scaled.c) c *= atom0_;
            Poly sum = numer;
            if (scaled.c.size() > sum.c.size()) sum.c.resize(scaled.c.size(), 0.0);
            for (std::size_t i = 0; i < scaled.c.size(); ++i) sum.c[i] += scaled.c[i];
            numer = sum;
        }
        num_d_[0] = numer;
        for (int k = 1; k <= 3; ++k) {
            num_d_[k] = num_d_[k - 1].derivative();
            den_d_[k] = den_d_[k - 1].derivative();
        }

        Eigen::EigenSolver<Eigen::MatrixXd> es(-t_);
        radius_ = kInf;
        for (int i = 0; i < n; ++i) {
            Complex ev(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
            poles_.push_back(ev);
            radius_ = std::min(radius_, ev.real());
        }

        // E[X^k] = k! alpha (-T)^{-k} e
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(-t_);
        Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
        for (int k = 1; k <= 8; ++k) {
            v = lu.solve(v);
            moments_[k] = factorial(k) * alpha_.dot(v);
        }
    }

    Kind kind() const override { return Kind::matrix_exponential; }
    std::string name() const override { return "matrix_exponential"; }
    bool lattice() const override { return false; }
    double mgf_radius() const override { return radius_; }
    double raw_moment(int k) const override { return moments_[k]; }

    // Resolvent by LU with partial pivoting at each z; N is small so
    // robustness wins over speed here.
    Complex mgf(Complex z) const override {
        check_not_pole(z);
        return atom0_ + resolve(z, 1);
    }
    Complex mgf_derivative(Complex z, int order) const override {
        if (order < 1 || order > 3) throw Error("matrix_exponential: order must be 1..3");
        check_not_pole(z);
        return factorial(order) * resolve(z, order + 1);
    }

    Complex num(Complex z) const override { return num_d_[0].eval(z); }
    Complex num_derivative(Complex z, int order) const override { return num_d_[order].eval(z); }
    Complex den(Complex z) const override { return den_d_[0].eval(z); }
    Complex den_derivative(Complex z, int order) const override { return den_d_[order].eval(z); }
    const std::vector<Complex>& poles() const override { return poles_; }

    double tail(double x) const override {
        if (x < 0) return 1.0;
        if (x == 0) return alpha_.sum();
        Eigen::MatrixXd e = (t_ * x).exp();
        return (alpha_.transpose() * e).sum();
    }
    double density(double x) const override {
        if (x < 0) return 0.0;
        Eigen::MatrixXd e = (t_ * x).exp();
        return alpha_.dot(e * s_);
    }
    std::vector<std::pair<double, double>> atoms() const override {
        if (atom0_ > 0) return {{0.0, atom0_}};
        return {};
    }
    double sample(CounterRng& rng) const override {
        const int n = static_cast<int>(alpha_.size());
        double u = rng.next_uniform();
        if (u <= atom0_) return 0.0;
        u -= atom0_;
        int phase = n - 1;
        for (int i = 0; i < n; ++i) {
            u -= alpha_(i);
            if (u <= 0) {
                phase = i;
                break;
            }
        }
        double time = 0;
        for (int guard = 0; guard < 100000000; ++guard) {
            double exit_rate = -t_(phase, phase);
            time += rng.next_exponential(exit_rate);
            double v = rng.next_uniform() * exit_rate;
            v -= s_(phase);
            if (v <= 0) return time;
            int next = phase;
            for (int j = 0; j < n; ++j) {
                if (j == phase) continue;
                v -= t_(phase, j);
                if (v <= 0) {
                    next = j;
                    break;
                }
            }
            phase = next;
        }
        throw Error("matrix_exponential: sampling did not absorb");
    }

    const Eigen::MatrixXd& t() const { return t_; }
    const Eigen::VectorXd& alpha_vec() const { return alpha_; }

private:
    Complex resolve(Complex z, int power) const {
        const int n = static_cast<int>(alpha_.size());
        Eigen::MatrixXcd m = -t_.cast<Complex>();
        for (int i = 0; i < n; ++i) m(i, i) -= z;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
        Eigen::VectorXcd v = s_.cast<Complex>();
        for (int p = 0; p < power; ++p) v = lu.solve(v);
        Complex acc = 0.0;
        for (int i = 0; i < n; ++i) acc += alpha_(i) * v(i);
        return acc;
    }

    std::vector<double> alpha_raw_;
    Eigen::VectorXd alpha_;
    Eigen::MatrixXd t_;
    Eigen::VectorXd s_;
    double atom0_ = 0;
    double radius_ = kInf;
    double moments_[9] = {0};
    Poly num_d_[4], den_d_[4];
    std::vector<Complex> poles_;
};

// ------------------------------------------------------------------ uniform01

class Uniform01Law final : public Law {
public:
    Kind kind() const override { return Kind::uniform01; }
    std::string name() const override { return "uniform01"; }
    bool lattice() const override { return false; }
    double mgf_radius() const override { return kInf; }
    double raw_moment(int k) const override { return 1.0 / (k + 1); }

    Complex num(Complex z) const override { return segment_moment_integral(0, z); }
    Complex num_derivative(Complex z, int order) const override {
        return segment_moment_integral(order, z);
    }

    double tail(double x) const override { return x <= 0 ? 1.0 : (x >= 1 ? 0.0 : 1.0 - x); }
    double density(double x) const override { return (x >= 0 && x < 1) ? 1.0 : 0.0; }
    std::vector<double> breakpoints() const override { return {1.0}; }
    double sample(CounterRng& rng) const override { return rng.next_uniform(); }
};

// ------------------------------------------------------- truncated exponential

class TruncatedExponentialLaw final : public Law {
public:
    TruncatedExponentialLaw(double rate, double priority) : rate_(rate), d_(priority) {
        require(rate > 0, "truncated_exponential: rate must be > 0");
        require(priority > 0, "truncated_exponential: priority must be > 0");
        // E[X^k] = (k/lambda) J_{k-1},  J_k = E[X^k] - d^k e^{-lambda d}
        double j_prev = 1.0 - std::exp(-rate_ * d_);
        moments_[0] = 1.0;
        for (int k = 1; k <= 8; ++k) {
            moments_[k] = (k / rate_) * j_prev;
            j_prev = moments_[k] - std::pow(d_, k) * std::exp(-rate_ * d_);
        }
    }

    Kind kind() const override { return Kind::truncated_exponential; }
    std::string name() const override { return "truncated_exponential"; }
    bool lattice() const override { return false; }
    double mgf_radius() const override { return kInf; }
    double raw_moment(int k) const override { return moments_[k]; }

    // E[X^k e^{zX}] = lambda d^{k+1} E_k((z-lambda) d) + d^k e^{(z-lambda) d}
    Complex num(Complex z) const override { return derivative_any(z, 0); }
    Complex num_derivative(Complex z, int order) const override {
        return derivative_any(z, order);
    }

    double tail(double x) const override {
        if (x < 0) return 1.0;
        return x >= d_ ? 0.0 : std::exp(-rate_ * x);
    }
    double density(double x) const override {
        return (x >= 0 && x < d_) ? rate_ * std::exp(-rate_ * x) : 0.0;
    }
    std::vector<std::pair<double, double>> atoms() const override {
        return {{d_, std::exp(-rate_ * d_)}};
    }
    std::vector<double> breakpoints() const override { return {d_}; }
    double sample(CounterRng& rng) const override {
        return std::min(rng.next_exponential(rate_), d_);
    }

private:
    Complex derivative_any(Complex z, int k) const {
        Complex td = (z - rate_) * d_;
        return rate_ * std::pow(d_, k + 1) * segment_moment_integral(k, td) +
               std::pow(d_, k) * std::exp(td);
    }

    double rate_, d_;
    double moments_[9] = {0};
};

// --------------------------------------------------------------- discrete pmf

class DiscretePmfLaw final : public Law {
public:
    explicit DiscretePmfLaw(std::vector<double> pmf) : pmf_(std::move(pmf)) {
        require(!pmf_.empty(), "discrete_pmf: pmf must be nonempty");
        double sum = 0;
        for (double p : pmf_) {
            require(p >= 0, "discrete_pmf: probabilities must be >= 0");
            sum += p;
        }
        require(std::abs(sum - 1.0) < 1e-12, "discrete_pmf: pmf must sum to 1 (tolerance 1e-12)");
        while (pmf_.size() > 1 && pmf_.back() == 0.0) pmf_.pop_back();
        cdf_.resize(pmf_.size());
        std::partial_sum(pmf_.begin(), pmf_.end(), cdf_.begin());
    }

    Kind kind() const override { return Kind::discrete_pmf; }
    std::string name() const override { return "discrete_pmf"; }
    bool lattice() const override { return true; }
    double mgf_radius() const override { return kInf; }

    double raw_moment(int k) const override {
        double acc = 0;
        for (std::size_t j = 1; j < pmf_.size(); ++j) acc += std::pow(double(j), k) * pmf_[j];
        return acc;
    }

    Complex num(Complex z) const override {
        Complex w = std::exp(z), acc = 0.0, wk = 1.0;
        for (double p : pmf_) {
            acc += p * wk;
            wk *= w;
        }
        return acc;
    }
    Complex num_derivative(Complex z, int order) const override {
        Complex w = std::exp(z), acc = 0.0, wk = 1.0;
        for (std::size_t k = 0; k < pmf_.size(); ++k) {
            acc += pmf_[k] * std::pow(double(k), order) * wk;
            wk *= w;
        }
        return acc;
    }

    double log_abs_one_minus_g(Complex z) const override {
        // 1 - sum p_k e^{kz}, evaluated with the dominant exponential factored out.
        double m = 0.0;
        for (std::size_t k = 0; k < pmf_.size(); ++k)
            if (pmf_[k] > 0) m = std::max(m, std::log(pmf_[k]) + double(k) * z.real());
        Complex acc = std::exp(Complex(-m, 0.0));
        for (std::size_t k = 0; k < pmf_.size(); ++k)
            if (pmf_[k] > 0)
                acc -= std::exp(Complex(std::log(pmf_[k]) - m, 0.0) + double(k) * Complex(0, z.imag()));
        return m + std::log(std::abs(acc));
    }

    double tail(double x) const override {
        if (x < 0) return 1.0;
        double acc = 0;
        for (std::size_t k = 0; k < pmf_.size(); ++k)
            if (double(k) > x) acc += pmf_[k];
        return acc;
    }
    std::vector<double> pmf_table(double) const override { return pmf_; }
    double sample(CounterRng& rng) const override {
        double u = rng.next_uniform();
        auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return double(it == cdf_.end() ? cdf_.size() - 1 : std::size_t(it - cdf_.begin()));
    }

private:
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

// ------------------------------------------------------------------ geometric

// Support {1,2,...}, P(X=k) = p (1-p)^{k-1}.
class GeometricLaw final : public Law {
public:
    explicit GeometricLaw(double p) : p_(p) {
        require(p > 0 && p < 1, "geometric: p must lie in (0,1)");
        poles_ = {Complex(-std::log1p(-p), 0.0)};
    }

    Kind kind() const override { return Kind::geometric; }
    std::string name() const override { return "geometric"; }
    bool lattice() const override { return true; }
    double mgf_radius() const override { return -std::log1p(-p_); }

    double raw_moment(int k) const override {
        double acc = 0, w = p_;
        for (int j = 1; j < 100000; ++j) {
            double term = std::pow(double(j), k) * w;
            acc += term;
            if (term < 1e-17 * acc && j > 2) break;
            w *= (1 - p_);
        }
        return acc;
    }

    Complex num(Complex z) const override { return p_ * std::exp(z); }
    Complex num_derivative(Complex z, int) const override { return p_ * std::exp(z); }
    Complex den(Complex z) const override { return 1.0 - (1 - p_) * std::exp(z); }
    Complex den_derivative(Complex z, int) const override { return -(1 - p_) * std::exp(z); }
    const std::vector<Complex>& poles() const override { return poles_; }

    double tail(double x) const override {
        if (x < 0) return 1.0;
        return std::pow(1 - p_, std::floor(x));
    }
    std::vector<double> pmf_table(double tol) const override {
        std::vector<double> t{0.0};
        double w = p_;
        while (w > tol || t.size() < 2) {
            t.push_back(w);
            w *= (1 - p_);
            if (t.size() > 2000000) break;
        }
        return t;
    }
    double sample(CounterRng& rng) const override {
        return std::max(1.0, std::ceil(std::log(rng.next_uniform()) / std::log1p(-p_)));
    }

private:
    double p_;
    std::vector<Complex> poles_;
};

// ---------------------------------------------------------- negative binomial

// Support {0,1,...}, pmf C(k+n-1,k) p^k (1-p)^n, g = ((1-p)/(1-p e^z))^n.
class NegativeBinomialLaw final : public Law {
public:
    NegativeBinomialLaw(double p, int n) : p_(p), n_(n) {
        require(p > 0 && p < 1, "negative_binomial: p must lie in (0,1)");
        require(n >= 1, "negative_binomial: n must be >= 1");
        poles_ = {Complex(-std::log(p), 0.0)};
    }

    Kind kind() const override { return Kind::negative_binomial; }
    std::string name() const override { return "negative_binomial"; }
    bool lattice() const override { return true; }
    double mgf_radius() const override { return -std::log(p_); }

    double raw_moment(int k) const override {
        double acc = 0, w = std::pow(1 - p_, n_);
        for (int j = 0; j < 4000000; ++j) {
            acc += std::pow(double(j), k) * w;
            double next = w * p_ * (j + n_) / (j + 1.0);
            if (next < 1e-18 * (acc + 1e-300) && j > 2) break;
            w = next;
        }
        return acc;
    }

    Complex num(Complex) const override { return std::pow(1 - p_, n_); }
    Complex num_derivative(Complex, int) const override { return 0.0; }
    Complex den(Complex z) const override { return std::pow(1.0 - p_ * std::exp(z), n_); }
    Complex den_derivative(Complex z, int order) const override {
        // d/dz of u^n with u = 1 - p e^z, using u' = u - 1.
        const Complex u = 1.0 - p_ * std::exp(z);
        const Complex w = u - 1.0;
        const double n = n_;
        if (order == 1) return n * std::pow(u, n_ - 1) * w;
        if (order == 2)
            return n * (n - 1) * std::pow(u, n_ - 2) * w * w + n * std::pow(u, n_ - 1) * w;
        return n * (n - 1) * (n - 2) * std::pow(u, n_ - 3) * w * w * w +
               3.0 * n * (n - 1) * std::pow(u, n_ - 2) * w * w + n * std::pow(u, n_ - 1) * w;
    }
    const std::vector<Complex>& poles() const override { return poles_; }

    double tail(double x) const override {
        if (x < 0) return 1.0;
        double acc = 0, w = std::pow(1 - p_, n_);
        for (int j = 0; j < 4000000; ++j) {
            if (double(j) > x) acc += w;
            double next = w * p_ * (j + n_) / (j + 1.0);
            if (double(j) > x && next < 1e-18 * (acc + 1e-300)) break;
            w = next;
        }
        return acc;
    }
    std::vector<double> pmf_table(double tol) const override {
        std::vector<double> t;
        double w = std::pow(1 - p_, n_), cum = 0;
        for (int j = 0; j < 4000000; ++j) {
            t.push_back(w);
            cum += w;
            if (1 - cum < tol) break;
            w *= p_ * (j + n_) / (j + 1.0);
        }
        return t;
    }
    double sample(CounterRng& rng) const override {
        double total = 0;
        for (int i = 0; i < n_; ++i)
            total += std::floor(std::log(rng.next_uniform()) / std::log(p_));
        return total;
    }

private:
    double p_;
    int n_;
    std::vector<Complex> poles_;
};

// ------------------------------------------------- tilted continuous ladder

// F(dx) = e^{kappa x} (alpha/c) Gbar(x) dx; g(z) = beta (g_C(z+kappa)-1)/(z+kappa).
// num/den keep the witness entire: num = beta * (witness_C(w))/w with the
// removable singularity at w=0 patched by the claim-moment series.
class TiltedLadderContinuousLaw final : public Law {
public:
    TiltedLadderContinuousLaw(Distribution claims, double beta, double kappa)
        : claims_(std::move(claims)), beta_(beta), kappa_(kappa) {
        for (int k = 1; k <= 8; ++k) claim_moment_[k] = claims_.raw_moment(k);
        for (Complex p : claims_.poles()) poles_.push_back(p - kappa_);
        radius_ = claims_.moments().mgf_radius;
        if (radius_ < 1e300) radius_ -= kappa_;
    }

    Kind kind() const override { return Kind::tilted_ladder_continuous; }
    std::string name() const override { return "tilted_ladder_continuous"; }
    bool lattice() const override { return false; }
    double mgf_radius() const override { return radius_; }

    double raw_moment(int k) const override {
        if (k > 3) throw Error("tilted_ladder_continuous: raw moments available up to order 3");
        return mgf_derivative(0.0, k).real();
    }

    Complex num(Complex z) const override { return beta_ * psi(z + kappa_, 0); }
    Complex num_derivative(Complex z, int order) const override {
        return beta_ * psi(z + kappa_, order);
    }
    Complex den(Complex z) const override { return claims_.law().den(z + kappa_); }
    Complex den_derivative(Complex z, int order) const override {
        return claims_.law().den_derivative(z + kappa_, order);
    }
    const std::vector<Complex>& poles() const override { return poles_; }

    double density(double x) const override {
        if (x < 0) return 0.0;
        return beta_ * std::exp(kappa_ * x) * claims_.tail(x);
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> b = claims_.density_breakpoints();
        for (auto& a : claims_.atom_list()) b.push_back(a.first);
        std::sort(b.begin(), b.end());
        return b;
    }

    double tail(double x) const override {
        // integral_x^inf of the ladder density, by adaptive Simpson per segment.
        if (x < 0) x = 0;
        double cut = std::max(x + 1.0, 1.0);
        for (int guard = 0; guard < 400 && density(cut) > 1e-18; ++guard) cut *= 1.5;
        std::vector<double> knots{x};
        for (double b : breakpoints())
            if (b > x && b < cut) knots.push_back(b);
        knots.push_back(cut);
        std::sort(knots.begin(), knots.end());
        double acc = 0;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i)
            acc += simpson(knots[i], knots[i + 1]);
        return std::min(1.0, acc);
    }

    double sample(CounterRng&) const override {
        throw Error("tilted_ladder_continuous: sampling not supported");
    }

    const Distribution& claims() const { return claims_; }
    double beta() const { return beta_; }
    double kappa() const { return kappa_; }

private:
    // psi(w) = (num_C(w) - den_C(w)) / w and derivatives; series patch near 0.
    Complex psi(Complex w, int order) const {
        const auto& c = claims_.law();
        if (std::abs(w) >= 1e-4) {
            Complex b[4];
            for (int j = 0; j <= std::min(order, 3); ++j)
                b[j] = (j == 0 ? c.witness(w)
                               : c.num_derivative(w, j) - c.den_derivative(w, j));
            switch (order) {
                case 0: return b[0] / w;
                case 1: return b[1] / w - b[0] / (w * w);
                case 2: return b[2] / w - 2.0 * b[1] / (w * w) + 2.0 * b[0] / (w * w * w);
                default:
                    return b[3] / w - 3.0 * b[2] / (w * w) + 6.0 * b[1] / (w * w * w) -
                           6.0 * b[0] / (w * w * w * w);
            }
        }
        // (g_C - 1)/w = sum_k m_k w^{k-1}/k!, times den_C
        Complex s[4] = {0.0, 0.0, 0.0, 0.0};
        for (int k = 1; k <= 8; ++k) {
            double inv = claim_moment_[k] / factorial(k);
            if (k - 1 >= 0) s[0] += inv * std::pow(w, k - 1);
            if (k - 2 >= 0) s[1] += inv * double(k - 1) * std::pow(w, k - 2);
            if (k - 3 >= 0) s[2] += inv * double((k - 1) * (k - 2)) * std::pow(w, k - 3);
            if (k - 4 >= 0) s[3] += inv * double((k - 1) * (k - 2) * (k - 3)) * std::pow(w, k - 4);
        }
        Complex d[4];
        for (int j = 0; j <= std::min(order, 3); ++j)
            d[j] = (j == 0 ? c.den(w) : c.den_derivative(w, j));
        switch (order) {
            case 0: return d[0] * s[0];
            case 1: return d[1] * s[0] + d[0] * s[1];
            case 2: return d[2] * s[0] + 2.0 * d[1] * s[1] + d[0] * s[2];
            default:
                return d[3] * s[0] + 3.0 * d[2] * s[1] + 3.0 * d[1] * s[2] + d[0] * s[3];
        }
    }

    double simpson(double a, double b) const {
        // segment ends sit on density breakpoints: take one-sided limits
        double delta = std::min(1e-9, 1e-6 * (b - a));
        return simpson_rec(a, b, density(a + delta), density(0.5 * (a + b)), density(b - delta),
                           24);
    }
    double simpson_rec(double a, double b, double fa, double fm, double fb, int depth) const {
        double m = 0.5 * (a + b);
        double lm = density(0.5 * (a + m)), rm = density(0.5 * (m + b));
        double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
        double left = (m - a) / 6.0 * (fa + 4 * lm + fm);
        double right = (b - m) / 6.0 * (fm + 4 * rm + fb);
        if (depth <= 0 || std::abs(left + right - whole) < 1e-13 * (1.0 + std::abs(left + right)))
            return left + right + (left + right - whole) / 15.0;
        return simpson_rec(a, m, fa, lm, fm, depth - 1) +
               simpson_rec(m, b, fm, rm, fb, depth - 1);
    }

    Distribution claims_;
    double beta_, kappa_;
    double claim_moment_[9] = {0};
    double radius_ = kInf;
    std::vector<Complex> poles_;
};

} // namespace

} // namespace detail

// ------------------------------------------------------------ public wrapper

Distribution::Distribution(std::shared_ptr<const detail::Law> law) : law_(std::move(law)) {}

Distribution Distribution::exponential(double rate) {
    return Distribution(std::make_shared<detail::ExponentialLaw>(rate));
}
Distribution Distribution::erlang(int shape, double rate) {
    return Distribution(std::make_shared<detail::ErlangLaw>(shape, rate));
}
Distribution Distribution::hyperexponential(std::vector<double> w, std::vector<double> r) {
    return Distribution(std::make_shared<detail::HyperexponentialLaw>(std::move(w), std::move(r)));
}
Distribution Distribution::matrix_exponential(std::vector<double> alpha,
                                              std::vector<std::vector<double>> t) {
    return Distribution(
        std::make_shared<detail::MatrixExponentialLaw>(std::move(alpha), std::move(t)));
}
Distribution Distribution::uniform01() {
    return Distribution(std::make_shared<detail::Uniform01Law>());
}
Distribution Distribution::truncated_exponential(double rate, double priority) {
    return Distribution(std::make_shared<detail::TruncatedExponentialLaw>(rate, priority));
}
Distribution Distribution::discrete_pmf(std::vector<double> pmf) {
    return Distribution(std::make_shared<detail::DiscretePmfLaw>(std::move(pmf)));
}
Distribution Distribution::geometric(double p) {
    return Distribution(std::make_shared<detail::GeometricLaw>(p));
}
Distribution Distribution::negative_binomial(double p, int n) {
    return Distribution(std::make_shared<detail::NegativeBinomialLaw>(p, n));
}

Kind Distribution::kind() const { return law_->kind(); }
std::string Distribution::kind_name() const { return law_->name(); }
bool Distribution::lattice() const { return law_->lattice(); }

MomentSummary Distribution::moments() const {
    return MomentSummary{law_->raw_moment(1), law_->raw_moment(2), law_->mgf_radius()};
}
double Distribution::raw_moment(int order) const {
    if (order < 1 || order > 8) throw Error("raw_moment: order must be 1..8");
    return law_->raw_moment(order);
}

Complex Distribution::mgf(Complex z) const { return law_->mgf(z); }
Complex Distribution::mgf_derivative(Complex z, int order) const {
    return law_->mgf_derivative(z, order);
}
Complex Distribution::witness(Complex z) const { return law_->witness(z); }
Complex Distribution::witness_derivative(Complex z) const { return law_->witness_derivative(z); }
const std::vector<Complex>& Distribution::poles() const { return law_->poles(); }

double Distribution::tail(double x) const { return law_->tail(x); }
double Distribution::density(double x) const { return law_->density(x); }
std::vector<std::pair<double, double>> Distribution::atom_list() const { return law_->atoms(); }
std::vector<double> Distribution::density_breakpoints() const { return law_->breakpoints(); }
std::vector<double> Distribution::pmf_table(double tail_tol) const {
    return law_->pmf_table(tail_tol);
}
double Distribution::sample(CounterRng& rng) const { return law_->sample(rng); }

// -------------------------------------------------------------------- tilting

Distribution tilt_ladder_continuous(const Distribution& claims, double alpha, double premium,
                                    double kappa) {
    if (claims.lattice())
        throw ModelError("tilt_ladder_continuous: claims must be a continuous law");
    double m = claims.raw_moment(1);
    if (premium - alpha * m <= 0)
        throw NegativeLoading("tilt_ladder_continuous: requires premium > alpha * mean claim");
    auto law = std::make_shared<detail::TiltedLadderContinuousLaw>(claims, alpha / premium, kappa);
    Distribution tilted(law);
    Complex at0 = tilted.mgf(0.0);
    if (std::abs(at0 - 1.0) > 1e-10)
        throw ModelError("tilt_ladder_continuous: kappa does not solve the Lundberg equation");
    return tilted;
}

Distribution tilt_ladder_discrete(const Distribution& claims, double kappa) {
    if (!claims.lattice())
        throw ModelError("tilt_ladder_discrete: claims must be a lattice law");
    std::vector<double> f;
    double cum = 0;
    for (int k = 0; k < 2000000; ++k) {
        double lk = claims.tail(double(k)); // P(Z > k) = P(Z >= k+1)
        double fk = std::exp(kappa * k) * lk;
        f.push_back(fk);
        cum += fk;
        if (lk == 0.0) break;
        if (1.0 - cum < -1e-10) break;
        if (fk < 1e-15 && cum > 1.0 - 1e-15) break;
    }
    if (std::abs(cum - 1.0) > 1e-10)
        throw ModelError("tilt_ladder_discrete: kappa does not solve the discrete Lundberg equation");
    for (double& p : f) p /= cum;
    return Distribution::discrete_pmf(std::move(f));
}

Complex mgf_derivative_cauchy(const Distribution& model, Complex z, int order) {
    double radius = 0.05;
    for (Complex p : model.poles()) radius = std::min(radius, 0.5 * std::abs(z - p));
    if (radius <= 0) throw PoleEvaluation("mgf_derivative_cauchy: z coincides with a pole");
    const int n = 128;
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double theta = 2.0 * M_PI * j / n;
        Complex w = std::polar(radius, theta);
        acc += model.mgf(z + w) * std::exp(Complex(0, -order * theta));
    }
    double fact = 1;
    for (int i = 2; i <= order; ++i) fact *= i;
    return acc * fact / (double(n) * std::pow(radius, order));
}

} // namespace renewal
