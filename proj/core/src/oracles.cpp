#include "renewal/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace renewal {

namespace {

// Deterministic parallel map over path blocks: per-path RNG streams make the
// result independent of the worker count; block-ordered reduction fixes the
// summation order.
template <typename BlockFn>
void run_blocks(std::size_t n_paths, std::size_t n_blocks, const BlockFn& fn) {
    unsigned workers = worker_count();
    if (workers <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            fn(b, b * n_paths / n_blocks, (b + 1) * n_paths / n_blocks);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t b = w; b < n_blocks; b += workers)
                fn(b, b * n_paths / n_blocks, (b + 1) * n_paths / n_blocks);
        });
    }
    for (auto& t : pool) t.join();
}

McEstimate binomial_estimate(const std::vector<double>& block_hits, std::size_t n_paths,
                             std::uint64_t seed) {
    double hits = 0;
    for (double h : block_hits) hits += h; // block order fixed
    double p = hits / double(n_paths);
    McEstimate est;
    est.value = p;
    est.std_err = std::sqrt(std::max(p * (1.0 - p), 0.0) / double(n_paths));
    est.n_paths = n_paths;
    est.seed = seed;
    return est;
}

double node_density(const Distribution& model, double x, const std::vector<double>& breaks) {
    for (double b : breaks)
        if (std::abs(x - b) < 1e-9 * std::max(1.0, b))
            return 0.5 * (model.density(b - 1e-9) + model.density(b + 1e-9));
    return model.density(x);
}

} // namespace

unsigned worker_count() {
    if (const char* env = std::getenv("RENEWAL_THREADS")) {
        long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::vector<double> renewal_mass_exact(const std::vector<double>& pmf, int k_max) {
    if (pmf.empty() || pmf[0] >= 1.0 - 1e-12)
        throw MassAtZeroOne("renewal_mass_exact: pmf(0) must be < 1");
    std::vector<double> u(static_cast<std::size_t>(k_max) + 1, 0.0);
    const double denom = 1.0 - pmf[0];
    for (int k = 0; k <= k_max; ++k) {
        double acc = (k == 0) ? 1.0 : 0.0;
        for (std::size_t j = 1; j < pmf.size() && static_cast<int>(j) <= k; ++j)
            acc += pmf[j] * u[k - j];
        u[k] = acc / denom;
    }
    return u;
}

std::vector<double> renewal_grid_continuous(const Distribution& model, double x_max, double h) {
    if (model.lattice()) throw Error("renewal_grid_continuous: model must be continuous");
    const std::size_t n = static_cast<std::size_t>(std::llround(x_max / h));
    std::vector<double> breaks = model.density_breakpoints();
    std::vector<double> f(n + 1);
    for (std::size_t i = 0; i <= n; ++i) f[i] = node_density(model, i * h, breaks);

    auto atoms = model.atom_list();
    double atom_at_zero = 0;
    for (auto& [a, p] : atoms)
        if (a == 0.0) atom_at_zero = p;

    // trapezoid with Gregory endpoint corrections (drops the O(h^2) endpoint
    // bias; interior density jumps keep a small local h^2 term)
    std::vector<double> u(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        double rhs = 1.0;
        double u_i_weight = 1.0 - atom_at_zero;
        for (std::size_t j = 1; j < i; ++j) rhs += h * f[j] * u[i - j];
        if (i > 0) rhs += 0.5 * h * f[i] * u[0];
        if (i >= 3) {
            rhs -= (h / 24.0) * (3.0 * f[i] * u[0] - 4.0 * f[i - 1] * u[1] + f[i - 2] * u[2]);
            rhs += (h / 24.0) * (4.0 * f[1] * u[i - 1] - f[2] * u[i - 2]);
            u_i_weight -= (3.0 * h / 8.0) * f[0];
        } else if (i > 0) {
            u_i_weight -= 0.5 * h * f[0];
        }
        for (auto& [a, p] : atoms) {
            if (a <= 0.0) continue;
            double pos = i * h - a;
            if (pos < -1e-12) continue;
            // linear interpolation on the grid (exact when a is grid-aligned)
            double idx = pos / h;
            std::size_t lo = static_cast<std::size_t>(std::floor(idx + 1e-9));
            if (lo >= i) continue; // needs u[i] itself only when a == 0
            double frac = idx - double(lo);
            double val = (frac < 1e-9 || lo + 1 > n) ? u[lo]
                                                     : (1 - frac) * u[lo] + frac * u[lo + 1];
            rhs += p * val;
        }
        u[i] = rhs / u_i_weight;
    }
    return u;
}

GridRichardson renewal_grid_richardson(const Distribution& model, double x_max, double h) {
    std::vector<double> coarse = renewal_grid_continuous(model, x_max, h);
    std::vector<double> fine = renewal_grid_continuous(model, x_max, h / 2);
    GridRichardson out;
    out.h = h;
    out.value.resize(coarse.size());
    out.error_estimate.resize(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        double uf = fine[2 * i];
        out.value[i] = (4.0 * uf - coarse[i]) / 3.0;
        out.error_estimate[i] = std::abs(uf - coarse[i]) / 3.0;
    }
    return out;
}

double phase_type_renewal_density(const std::vector<double>& alpha,
                                  const std::vector<std::vector<double>>& t, double x) {
    const int n = static_cast<int>(alpha.size());
    double asum = 0;
    for (double a : alpha) asum += a;
    if (std::abs(asum - 1.0) > 1e-12)
        throw Error("phase_type_renewal_density: alpha must sum to 1 (proper phase type)");
    Eigen::VectorXd av(n);
    Eigen::MatrixXd tm(n, n);
    for (int i = 0; i < n; ++i) {
        av(i) = alpha[i];
        for (int j = 0; j < n; ++j) tm(i, j) = t[i][j];
    }
    Eigen::VectorXd s = -tm * Eigen::VectorXd::Ones(n);
    Eigen::MatrixXd gen = (s * av.transpose() + tm) * x;
    return av.dot(gen.exp() * s);
}

std::vector<double> ruin_discrete_dp(const Distribution& claims, int x_max) {
    // l(k) = P(Z >= k+1); truncate when the remaining mass drops below 1e-14
    std::vector<double> l;
    for (int k = 0; k < 4000000; ++k) {
        double lk = claims.tail(double(k));
        l.push_back(lk);
        if (lk < 1e-14) break;
    }
    double m = claims.raw_moment(1);
    std::vector<double> psi(static_cast<std::size_t>(x_max) + 1, 0.0);
    if (m <= 0.0) return psi;
    if (m >= 1.0) throw NegativeLoading("ruin_discrete_dp: needs E[Z] < 1");

    // Lbar(x) = sum_{y >= x} l(y)
    std::vector<double> lbar(l.size() + 1, 0.0);
    for (std::size_t i = l.size(); i-- > 0;) lbar[i] = lbar[i + 1] + l[i];

    const double denom = 1.0 - l[0];
    for (int x = 0; x <= x_max; ++x) {
        double acc = (static_cast<std::size_t>(x) < lbar.size()) ? lbar[x] : 0.0;
        for (int k = 1; k <= x && static_cast<std::size_t>(k) < l.size(); ++k)
            acc += l[k] * psi[x - k];
        psi[x] = acc / denom;
    }
    return psi;
}

std::vector<double> ruin_grid_continuous(const ContinuousRiskModel& model, double x_max,
                                         double h) {
    const std::size_t n = static_cast<std::size_t>(std::llround(x_max / h));
    const double beta = model.alpha / model.premium;
    const Distribution& claims = model.claims;
    std::vector<double> breaks = claims.density_breakpoints();
    for (auto& [a, p] : claims.atom_list()) breaks.push_back(a);

    auto gbar = [&](double y) { return claims.tail(y); };
    std::vector<double> k(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        double y = i * h;
        bool at_break = false;
        for (double b : breaks)
            if (std::abs(y - b) < 1e-9 * std::max(1.0, b)) at_break = true;
        k[i] = beta * (at_break ? 0.5 * (gbar(y - 1e-9) + gbar(y + 1e-9)) : gbar(y));
    }
    // zbar(x) = beta (m - int_0^x Gbar); cumulative trapezoid for the integral
    std::vector<double> zbar(n + 1);
    double cum = 0;
    zbar[0] = beta * model.claim_mean;
    for (std::size_t i = 1; i <= n; ++i) {
        cum += 0.5 * h * (k[i - 1] + k[i]) / beta;
        zbar[i] = beta * (model.claim_mean - cum);
    }
    std::vector<double> psi(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        double rhs = zbar[i];
        for (std::size_t j = 1; j < i; ++j) rhs += h * k[j] * psi[i - j];
        if (i > 0) rhs += 0.5 * h * k[i] * psi[0];
        psi[i] = (i == 0) ? rhs : rhs / (1.0 - 0.5 * h * k[0]);
    }
    return psi;
}

McEstimate ruin_mc_continuous(const ContinuousRiskModel& model, double x, std::size_t n_paths,
                              double horizon, std::uint64_t seed) {
    const double safe_reserve = 40.0 / model.kappa;
    const double c = model.premium, alpha = model.alpha;
    const std::size_t n_blocks = std::max<std::size_t>(64, worker_count() * 4);
    std::vector<double> hits(n_blocks, 0.0);
    run_blocks(n_paths, n_blocks, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        double h = 0;
        for (std::size_t p = lo; p < hi; ++p) {
            CounterRng rng(seed, p);
            double t = 0, s = x;
            while (true) {
                double dt = rng.next_exponential(alpha);
                t += dt;
                if (t > horizon) break;
                s += c * dt;
                s -= model.claims.sample(rng);
                if (s < 0) {
                    h += 1.0;
                    break;
                }
                if (s > safe_reserve) break; // Lundberg bound < 4e-18
            }
        }
        hits[b] = h;
    });
    return binomial_estimate(hits, n_paths, seed);
}

McEstimate renewal_mc(const Distribution& model, double x, std::size_t n_paths,
                      std::uint64_t seed) {
    const std::size_t n_blocks = std::max<std::size_t>(64, worker_count() * 4);
    std::vector<double> sums(n_blocks, 0.0), sq(n_blocks, 0.0);
    run_blocks(n_paths, n_blocks, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        double s1 = 0, s2 = 0;
        for (std::size_t p = lo; p < hi; ++p) {
            CounterRng rng(seed, p);
            double s = 0;
            long count = 0;
            while (s <= x) {
                ++count; // counts S_0 = 0 as the first renewal
                s += model.sample(rng);
            }
            s1 += double(count);
            s2 += double(count) * double(count);
        }
        sums[b] = s1;
        sq[b] = s2;
    });
    double s1 = 0, s2 = 0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        s1 += sums[b];
        s2 += sq[b];
    }
    double mean = s1 / double(n_paths);
    double var = std::max(0.0, s2 / double(n_paths) - mean * mean);
    McEstimate est;
    est.value = mean;
    est.std_err = std::sqrt(var / double(n_paths));
    est.n_paths = n_paths;
    est.seed = seed;
    return est;
}

McEstimate ruin_mc_or_stoploss(double lambda, double d, double alpha, double c1, double c2,
                               double x1, double x2, std::size_t n_paths, std::uint64_t seed) {
    // common severity stream V ~ exp(lambda) at Poisson rate alpha;
    // safe reserves from each marginal's own Lundberg exponent
    ContinuousRiskModel m1 =
        ContinuousRiskModel::build(Distribution::truncated_exponential(lambda, d), alpha, c1);
    double alpha2 = alpha * std::exp(-lambda * d);
    ContinuousRiskModel m2 =
        ContinuousRiskModel::build(Distribution::exponential(lambda), alpha2, c2);
    const double safe1 = 40.0 / m1.kappa, safe2 = 40.0 / m2.kappa;
    const double horizon = 1e7;

    const std::size_t n_blocks = std::max<std::size_t>(64, worker_count() * 4);
    std::vector<double> hits(n_blocks, 0.0);
    run_blocks(n_paths, n_blocks, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        double h = 0;
        for (std::size_t p = lo; p < hi; ++p) {
            CounterRng rng(seed, p);
            double t = 0, s1 = x1, s2 = x2;
            bool alive1 = true, alive2 = true;
            while (true) {
                double dt = rng.next_exponential(alpha);
                t += dt;
                if (t > horizon) break;
                double v = rng.next_exponential(lambda);
                if (alive1) {
                    s1 += c1 * dt - std::min(v, d);
                    if (s1 < 0) {
                        h += 1.0;
                        break;
                    }
                    if (s1 > safe1) alive1 = false;
                }
                if (alive2) {
                    s2 += c2 * dt - std::max(v - d, 0.0);
                    if (s2 < 0) {
                        h += 1.0;
                        break;
                    }
                    if (s2 > safe2) alive2 = false;
                }
                if (!alive1 && !alive2) break;
            }
        }
        hits[b] = h;
    });
    return binomial_estimate(hits, n_paths, seed);
}

} // namespace renewal
