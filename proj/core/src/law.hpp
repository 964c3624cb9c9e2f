#pragma once

// Internal distribution-family machinery. Not installed.

#include <cmath>
#include <complex>
#include <vector>

#include "renewal/distribution.hpp"

namespace renewal::detail {

// Real-coefficient polynomial, ascending powers. Used for the rational
// families (hyperexponential, matrix-exponential characteristic polynomials).
struct Poly {
    std::vector<double> c;

    Complex eval(Complex z) const {
        Complex acc = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
        return acc;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly{{0.0}};
        Poly d;
        d.c.resize(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) d.c[i - 1] = c[i] * static_cast<double>(i);
        return d;
    }

    static Poly mul(const Poly& a, const Poly& b) {
        Poly r;
        r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }

    static Poly sub(const Poly& a, const Poly& b) {
        Poly r = a;
        if (b.c.size() > r.c.size()) r.c.resize(b.c.size(), 0.0);
        for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
        return r;
    }

    static Poly add(const Poly& a, const Poly& b) {
        Poly r = a;
        if (b.c.size() > r.c.size()) r.c.resize(b.c.size(), 0.0);
        for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
        return r;
    }
};

// E_k(s) = integral_0^1 v^k e^{s v} dv, stable for all complex s.
Complex segment_moment_integral(int k, Complex s);

class Law {
public:
    virtual ~Law() = default;

    virtual Kind kind() const = 0;
    virtual std::string name() const = 0;
    virtual bool lattice() const = 0;
    virtual double mgf_radius() const = 0;
    virtual double raw_moment(int k) const = 0;

    // g = num/den with num, den entire and free of common zeros.
    virtual Complex num(Complex z) const = 0;
    virtual Complex num_derivative(Complex z, int order) const = 0;
    virtual Complex den(Complex) const { return 1.0; }
    virtual Complex den_derivative(Complex, int) const { return 0.0; }

    virtual const std::vector<Complex>& poles() const {
        static const std::vector<Complex> none;
        return none;
    }

    virtual double tail(double x) const = 0;
    virtual double sample(CounterRng& rng) const = 0;

    virtual double density(double) const {
        throw Error(name() + ": no density (lattice family)");
    }
    virtual std::vector<std::pair<double, double>> atoms() const { return {}; }
    virtual std::vector<double> breakpoints() const { return {}; }
    virtual std::vector<double> pmf_table(double) const {
        throw Error(name() + ": no pmf (continuous family)");
    }

    // log |1 - g(z)|, overridable where the direct path overflows.
    virtual double log_abs_one_minus_g(Complex z) const {
        Complex w = witness(z);
        Complex d = den(z);
        return std::log(std::abs(w)) - std::log(std::abs(d));
    }

    virtual Complex mgf(Complex z) const; // num/den default
    virtual Complex mgf_derivative(Complex z, int order) const; // quotient rule default

    Complex witness(Complex z) const { return num(z) - den(z); }
    Complex witness_derivative(Complex z) const {
        return num_derivative(z, 1) - den_derivative(z, 1);
    }

protected:
    void check_not_pole(Complex z) const;
};

} // namespace renewal::detail
