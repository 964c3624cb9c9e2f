#pragma once

#include <optional>
#include <vector>

#include "renewal/distribution.hpp"
#include "renewal/rootfinder.hpp"

namespace renewal {

// Which expansion integrand a residue belongs to. Signs are folded so that a
// "term" always enters its expansion with a plus:
//   nonlattice_v    term = c e^{-x z_j} of  Res(e^{-xz} / (z (1-g)))
//   lattice_v       term = c e^{-k z_j} of  Res(e^{-kz} / ((e^z-1)(1-g)))
//   density / mass  term = c e^{-x z_j} of -Res(e^{-xz} / (1-g))
//   ruin_continuous term = c e^{-x (z_j+kappa)} of  Res((am-c) e^{-x(z+k)} / (c (1-g)(z+k)))
//   ruin_discrete   term = c e^{-x (z_j+kappa)} of -Res(((m-g e^{k+z}) e^{-x(z+k)}) / ((1-g)(1-e^{k+z})))
enum class IntegrandKind {
    nonlattice_v,
    lattice_v,
    density,
    mass,
    ruin_continuous,
    ruin_discrete,
};

// Extra data the ruin integrands need beyond the (tilted) model.
struct RuinContext {
    double kappa = 0;
    double alpha_over_c = 0;              // continuous kind only
    double claim_mean = 0;                // m = E[Z]
    const Distribution* claims = nullptr; // for E[Z e^{wZ}] in the simple forms

    double continuous_factor() const { return alpha_over_c * claim_mean - 1.0; } // (am-c)/c
};

// Closed-form coefficient of a simple pole. Throws NotSimple when
// root.multiplicity != 1 and DegenerateFactor when the kind's extra factor
// vanishes at the root (callers fall back to residue_numeric).
Complex residue_simple(const Distribution& model, const Root& root, IntegrandKind kind,
                       const RuinContext* ruin = nullptr);

// Term value at a given x by trapezoid quadrature on a circle around the pole
// (node count doubling 64..4096 until 1e-10 relative agreement).
Complex residue_numeric(const Distribution& model, Complex pole, IntegrandKind kind, double x,
                        std::optional<double> radius_hint = std::nullopt,
                        const RuinContext* ruin = nullptr,
                        const std::vector<Root>* all_roots = nullptr);

// Principal-part coefficients b_1..b_order of the x-free integrand factor at a
// pole of the given order; term coefficients follow as p_l = (-1)^l b_{l+1}/l!.
std::vector<Complex> principal_part(const Distribution& model, Complex pole, int order,
                                    IntegrandKind kind, const RuinContext* ruin = nullptr,
                                    const std::vector<Root>* all_roots = nullptr);

} // namespace renewal
