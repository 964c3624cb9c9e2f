#pragma once

#include <optional>
#include <string>
#include <vector>

#include "renewal/distribution.hpp"
#include "renewal/residues.hpp"
#include "renewal/rootfinder.hpp"

namespace renewal {

// Compound Poisson surplus x + c t - sum Z_k with claim law `claims`.
// Construction computes the Lundberg root and the tilted ladder law and
// enforces positive safety loading.
struct ContinuousRiskModel {
    double alpha = 0;
    double premium = 0;
    Distribution claims;
    double claim_mean = 0;
    double kappa = 0;
    Distribution ladder;

    static ContinuousRiskModel build(const Distribution& claims, double alpha, double premium);
};

// Binomial-increment risk walk x + n - sum Z_j with integer claims, E[Z] in (0,1).
struct DiscreteRiskModel {
    Distribution claims;
    double claim_mean = 0;
    double kappa = 0;
    Distribution ladder;

    static DiscreteRiskModel build(const Distribution& claims);
};

// One ruin term: contribution Re(e^{-x exponent} sum_l coeff[l] x^l),
// doubled when `paired`. exponent = z_j + kappa.
struct RuinTerm {
    Complex exponent;
    int multiplicity = 1;
    std::vector<Complex> coeff;
    bool paired = false;
};

struct RuinExpansion {
    double kappa = 0;
    double remainder_exponent = 0; // r + kappa
    std::vector<RuinTerm> terms;   // term 0 is the Cramer-Lundberg pair
    // smallest scanned x from which the evaluation stays inside [0,1]; the
    // expansion is asymptotic and may leave the probability range below it
    double x_min = 0;
};

double evaluate(const RuinExpansion& e, double x);

// Multi-term expansions over the roots of the tilted transform in the strip
// Re(z) < r (fundamental domain when discrete).
RuinExpansion ruin_continuous(const ContinuousRiskModel& model, double r);
RuinExpansion ruin_discrete(const DiscreteRiskModel& model, double r);

// Term-0 coefficient from raw claim moments; ruin_continuous term 0 uses the
// same closed form, so the two code paths agree exactly.
double cramer_lundberg_constant(const ContinuousRiskModel& model);
double cramer_lundberg_constant(const DiscreteRiskModel& model);

// Two-term data of one marginal: psi ~ C0 e^{-kappa x} + Re[C1 e^{-(kappa+z1) x}].
// C1 absorbs the conjugate pair (it is twice the z1 residue coefficient).
struct MarginalTwoTerm {
    double kappa = 0;
    double c0 = 0;
    std::optional<Complex> z1;
    Complex c1 = 0.0; // 0 when no subdominant root exists

    static MarginalTwoTerm from(const ContinuousRiskModel& model);
};

struct BivariateModel {
    ContinuousRiskModel model1;
    ContinuousRiskModel model2;
    double q = 1.0; // direction x2/x1
    MarginalTwoTerm two1, two2;

    static BivariateModel build(ContinuousRiskModel m1, ContinuousRiskModel m2, double q);
};

// Dominance ordering of the four candidate functions along x2/x1 = q.
struct BivariateOutcome {
    std::string region;  // names of the two dominant candidates
    bool degenerate = false; // a tie within 1e-10: both orderings returned
    Complex d0, d1;      // exponents, Re d0 <= Re d1
    Complex coeff0, coeff1;
    std::vector<std::string> orderings; // region strings (two when degenerate)

    double evaluate(double x) const; // Re[D0 e^{-d0 x}] + Re[D1 e^{-d1 x}]
};

BivariateOutcome ruin_bivariate(const BivariateModel& model);

} // namespace renewal
