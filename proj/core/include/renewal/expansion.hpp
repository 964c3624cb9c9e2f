#pragma once

#include <string>
#include <vector>

#include "renewal/distribution.hpp"
#include "renewal/residues.hpp"
#include "renewal/rootfinder.hpp"

namespace renewal {

enum class ExpansionKind { v, density, mass };

// One residue term, stored per conjugate pair: the contribution at x is
// Re(e^{-x root} sum_l coeff[l] x^l), doubled when `paired` (root has a
// mirrored conjugate that is not stored separately).
struct PairTerm {
    Complex root;
    int multiplicity = 1;
    std::vector<Complex> coeff;
    bool paired = false;
};

struct Expansion {
    ExpansionKind kind = ExpansionKind::v;
    bool lattice = false;
    double r0 = 0;
    bool exact = false;
    double mu = 0, mu2 = 0;
    double slope = 0;     // 1/mu
    double intercept = 0; // mu2/(2 mu^2), +(mu+mu2)/(2 mu^2) when lattice
    double zero_atom = 0; // lattice mass only: S_0 atom entering u(0)
    bool growth_warning = false;
    std::vector<PairTerm> terms;
};

// v(x) = U(x) - x/mu - intercept as a sum of residue terms (z_0 excluded).
Expansion expand_v(const Distribution& model, double r0);

// Renewal density (non-lattice) / mass (lattice); z_0 included, no linear part.
Expansion expand_density(const Distribution& model, double r0);
Expansion expand_mass(const Distribution& model, double r0);

double evaluate(const Expansion& e, double x);

// U(x) = x/mu + intercept + v(x); only valid for a v-kind expansion.
double evaluate_renewal_function(const Expansion& v_expansion, double x);

struct EvalBreakdown {
    double value = 0;
    double linear_part = 0; // non-term portion included in value
    std::vector<double> term_values;
    double remainder_scale = 0; // e^{-r0 x}
};
EvalBreakdown evaluate_with_breakdown(const Expansion& e, double x);

// Heuristic check of the exact-expansion conditions: a structural gate
// (meromorphic decay only holds for the rational-transform families) plus
// decay sampling of sup_theta |1/(e^r (1-g))| (lattice) or |1/(r (1-g))|
// (non-lattice) along r in {10,20,40,80}. Advisory; sets e.exact.
struct ExactModeReport {
    bool exact = false;
    bool structurally_eligible = false;
    std::vector<std::pair<double, double>> samples; // (r, sampled sup)
    std::string note;
};
ExactModeReport exact_mode_check(const Distribution& model, Expansion& e);

} // namespace renewal
