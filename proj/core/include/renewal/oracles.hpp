#pragma once

#include <cstdint>
#include <vector>

#include "renewal/distribution.hpp"
#include "renewal/ruin.hpp"

namespace renewal {

struct McEstimate {
    double value = 0;
    double std_err = 0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

// Exact lattice renewal masses u_0..u_{k_max}:
//   u_k = (1_{k==0} + sum_{j>=1} pmf(j) u_{k-j}) / (1 - pmf(0)).
// Throws MassAtZeroOne when pmf(0) >= 1 - 1e-12.
std::vector<double> renewal_mass_exact(const std::vector<double>& pmf, int k_max);

// Trapezoid Volterra solve of U = 1 + F*U on the grid {0, h, ..., x_max};
// bias O(h^2). Densities with jumps take half-values at aligned nodes; atoms
// of F (stop-loss priority) are folded in directly.
std::vector<double> renewal_grid_continuous(const Distribution& model, double x_max, double h);

struct GridRichardson {
    double h = 0;
    std::vector<double> value;          // (4 U_{h/2} - U_h)/3 on the h grid
    std::vector<double> error_estimate; // |U_{h/2} - U_h|/3
};
GridRichardson renewal_grid_richardson(const Distribution& model, double x_max, double h);

// Renewal density alpha e^{(s alpha + T) x} s of a proper phase-type law
// (alpha must sum to 1), dense matrix exponential with Pade core.
double phase_type_renewal_density(const std::vector<double>& alpha,
                                  const std::vector<std::vector<double>>& t, double x);

// Discrete ruin probabilities psi(0..x_max) by forward substitution of the
// defective renewal equation; exact up to claim-tail truncation below 1e-14.
std::vector<double> ruin_discrete_dp(const Distribution& claims, int x_max);

// Continuous ruin by trapezoid solve of psi = zbar + (alpha/c) Gbar * psi.
std::vector<double> ruin_grid_continuous(const ContinuousRiskModel& model, double x_max, double h);

// Monte Carlo estimates; bitwise reproducible for a fixed (seed, n_paths)
// independent of thread count (counter-based per-path streams). Paths stop at
// ruin, at the Lundberg-safe reserve, or at the horizon cap.
McEstimate ruin_mc_continuous(const ContinuousRiskModel& model, double x, std::size_t n_paths,
                              double horizon, std::uint64_t seed);

McEstimate renewal_mc(const Distribution& model, double x, std::size_t n_paths,
                      std::uint64_t seed);

// Joint ruin P(either company ruins) for the stop-loss reinsurance pair: one
// exponential(lambda) severity stream at rate alpha; the insurer pays
// min(V,d) against premium c1, the reinsurer pays (V-d)^+ against c2.
McEstimate ruin_mc_or_stoploss(double lambda, double d, double alpha, double c1, double c2,
                               double x1, double x2, std::size_t n_paths, std::uint64_t seed);

// Worker cap honouring RENEWAL_THREADS (default: hardware concurrency).
unsigned worker_count();

} // namespace renewal
