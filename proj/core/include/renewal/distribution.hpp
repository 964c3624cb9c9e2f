#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "renewal/errors.hpp"
#include "renewal/rng.hpp"

namespace renewal {

using Complex = std::complex<double>;

enum class Kind {
    discrete_pmf,
    negative_binomial,
    geometric,
    exponential,
    erlang,
    hyperexponential,
    matrix_exponential,
    uniform01,
    truncated_exponential,
    tilted_ladder_continuous,
};

// mu/mu2 are the first two raw moments; mgf_radius is the abscissa of
// convergence of E[e^{zX}] (may be +inf).
struct MomentSummary {
    double mu = 0;
    double mu2 = 0;
    double mgf_radius = 0;

    bool radius_finite() const { return mgf_radius < 1e300; }
};

namespace detail {
class Law;
}

// Immutable inter-renewal / claim distribution with a complex-plane mgf.
//
// Every family exposes g as a ratio of entire functions num/den sharing no
// zeros, so zeros of the "witness" num-den coincide (with multiplicity) with
// zeros of g-1 and the witness itself has no poles. Root counting and Newton
// refinement run on the witness; g itself is still evaluated directly.
class Distribution {
public:
    static Distribution exponential(double rate);
    static Distribution erlang(int shape, double rate);
    static Distribution hyperexponential(std::vector<double> weights, std::vector<double> rates);
    static Distribution matrix_exponential(std::vector<double> alpha,
                                           std::vector<std::vector<double>> subintensity);
    static Distribution uniform01();
    static Distribution truncated_exponential(double rate, double priority);
    static Distribution discrete_pmf(std::vector<double> pmf);
    static Distribution geometric(double p);
    static Distribution negative_binomial(double p, int n);

    Kind kind() const;
    std::string kind_name() const;
    bool lattice() const;

    MomentSummary moments() const;
    double raw_moment(int order) const; // order in 1..8

    // g(z) = E[e^{zX}], meromorphic extension where the family has one.
    // Throws PoleEvaluation within 1e-12 of a pole.
    Complex mgf(Complex z) const;
    Complex mgf_derivative(Complex z, int order) const; // order in 1..3

    // Entire function with the same zeros (and multiplicities) as g-1.
    Complex witness(Complex z) const;
    Complex witness_derivative(Complex z) const;

    // Poles of the meromorphic extension of g (empty for entire families).
    const std::vector<Complex>& poles() const;

    double tail(double x) const; // P(X > x)

    // Continuous families only.
    double density(double x) const;
    std::vector<std::pair<double, double>> atom_list() const; // (location, mass)
    std::vector<double> density_breakpoints() const;

    // Lattice families only; truncated where the support is infinite.
    std::vector<double> pmf_table(double tail_tol = 1e-15) const;

    double sample(CounterRng& rng) const;

    const detail::Law& law() const { return *law_; }

private:
    explicit Distribution(std::shared_ptr<const detail::Law> law);
    std::shared_ptr<const detail::Law> law_;

    friend Distribution tilt_ladder_continuous(const Distribution&, double, double, double);
};

// Exponentially tilted ladder-height law F(dx) = e^{kappa x} (alpha/c) Gbar(x) dx
// of the continuous risk model. kappa must solve the Lundberg equation (checked
// to 1e-10); throws NegativeLoading when c <= alpha * E[claim].
Distribution tilt_ladder_continuous(const Distribution& claims, double alpha, double premium,
                                    double kappa);

// Discrete ladder pmf f(k) = e^{kappa k} P[Z > k], materialised on a finite
// support (mass tail below 1e-15) and normalised; the sum is checked to 1e-10.
Distribution tilt_ladder_discrete(const Distribution& claims, double kappa);

// Cauchy-integral derivative of g on a small circle (128-node trapezoid).
// Fallback path; closed forms are preferred and tested against it.
Complex mgf_derivative_cauchy(const Distribution& model, Complex z, int order);

} // namespace renewal
