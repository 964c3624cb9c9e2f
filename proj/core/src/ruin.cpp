#include "renewal/ruin.hpp"

#include <algorithm>
#include <cmath>

namespace renewal {

namespace {

constexpr double kPi = M_PI;

RuinContext make_context(double kappa, double alpha_over_c, double claim_mean,
                         const Distribution* claims) {
    RuinContext ctx;
    ctx.kappa = kappa;
    ctx.alpha_over_c = alpha_over_c;
    ctx.claim_mean = claim_mean;
    ctx.claims = claims;
    return ctx;
}

double scan_x_min(const RuinExpansion& e) {
    if (e.terms.empty() || e.kappa <= 0) return 0.0;
    const double step = 0.25 / e.kappa, hi = 30.0 / e.kappa;
    double x_min = 0.0;
    for (double x = hi; x >= -1e-12; x -= step) {
        double v = evaluate(e, x);
        if (v < -1e-12 || v > 1.0 + 1e-12) {
            x_min = x + step;
            break;
        }
    }
    return x_min;
}

std::vector<RuinTerm> ruin_terms(const Distribution& ladder, const std::vector<Root>& roots,
                                 IntegrandKind kind, const RuinContext& ctx, bool lattice) {
    std::vector<RuinTerm> terms;
    for (const Root& r : roots) {
        if (r.location.imag() < 0) continue;
        RuinTerm t;
        t.exponent = r.location + ctx.kappa;
        t.multiplicity = r.multiplicity;
        t.paired = !(r.location.imag() == 0.0 ||
                     (lattice && std::abs(r.location.imag() - kPi) < 1e-9));
        if (r.multiplicity == 1) {
            try {
                t.coeff = {residue_simple(ladder, r, kind, &ctx)};
            } catch (const DegenerateFactor&) {
                std::vector<Complex> b =
                    principal_part(ladder, r.location, 1, kind, &ctx, &roots);
                t.coeff = {b[0]};
            }
        } else {
            std::vector<Complex> b =
                principal_part(ladder, r.location, r.multiplicity, kind, &ctx, &roots);
            t.coeff.resize(r.multiplicity);
            double lfact = 1.0;
            for (int l = 0; l < r.multiplicity; ++l) {
                if (l > 0) lfact *= l;
                t.coeff[l] = b[l] * ((l % 2 == 0) ? 1.0 : -1.0) / lfact;
            }
        }
        terms.push_back(std::move(t));
    }
    std::sort(terms.begin(), terms.end(), [](const RuinTerm& a, const RuinTerm& b) {
        if (a.exponent.real() != b.exponent.real()) return a.exponent.real() < b.exponent.real();
        return std::abs(a.exponent.imag()) < std::abs(b.exponent.imag());
    });
    return terms;
}

} // namespace

ContinuousRiskModel ContinuousRiskModel::build(const Distribution& claims, double alpha,
                                               double premium) {
    if (alpha <= 0 || premium <= 0)
        throw Error("ContinuousRiskModel: alpha and premium must be > 0");
    double m = claims.raw_moment(1);
    if (premium - alpha * m <= 0)
        throw NegativeLoading("ContinuousRiskModel: safety loading c - alpha m must be > 0");
    double kappa = lundberg_root_continuous(claims, alpha, premium);
    Distribution ladder = tilt_ladder_continuous(claims, alpha, premium, kappa);
    return ContinuousRiskModel{alpha, premium, claims, m, kappa, std::move(ladder)};
}

DiscreteRiskModel DiscreteRiskModel::build(const Distribution& claims) {
    if (!claims.lattice()) throw Error("DiscreteRiskModel: claims must be a lattice law");
    double m = claims.raw_moment(1);
    if (m >= 1.0) throw NegativeLoading("DiscreteRiskModel: needs E[Z] in (0,1)");
    if (m <= 0.0) {
        // Z identically 0: psi vanishes; kappa/ladder are never used
        return DiscreteRiskModel{claims, 0.0, 0.0, claims};
    }
    double kappa = lundberg_root_discrete(claims);
    Distribution ladder = tilt_ladder_discrete(claims, kappa);
    return DiscreteRiskModel{claims, m, kappa, std::move(ladder)};
}

double evaluate(const RuinExpansion& e, double x) {
    double acc = 0;
    for (const RuinTerm& t : e.terms) {
        Complex poly = 0.0;
        double xp = 1.0;
        for (const Complex& c : t.coeff) {
            poly += c * xp;
            xp *= x;
        }
        Complex v = std::exp(-x * t.exponent) * poly;
        acc += t.paired ? 2.0 * v.real() : v.real();
    }
    return acc;
}

RuinExpansion ruin_continuous(const ContinuousRiskModel& model, double r) {
    if (r <= 0) throw Error("ruin_continuous: r must be > 0");
    RuinContext ctx = make_context(model.kappa, model.alpha / model.premium, model.claim_mean,
                                   &model.claims);
    std::vector<Root> roots = find_roots(model.ladder, SearchRegion{r, false, std::nullopt});
    RuinExpansion e;
    e.kappa = model.kappa;
    e.remainder_exponent = r + model.kappa;
    e.terms = ruin_terms(model.ladder, roots, IntegrandKind::ruin_continuous, ctx, false);
    // term 0 and cramer_lundberg_constant share one closed form, so the two
    // code paths agree exactly
    e.x_min = scan_x_min(e);
    return e;
}

RuinExpansion ruin_discrete(const DiscreteRiskModel& model, double r) {
    if (r <= 0) throw Error("ruin_discrete: r must be > 0");
    RuinExpansion e;
    e.kappa = model.kappa;
    e.remainder_exponent = r + model.kappa;
    if (model.claim_mean <= 0.0) return e; // no claims: psi = 0, empty expansion
    RuinContext ctx = make_context(model.kappa, 0.0, model.claim_mean, &model.claims);
    std::vector<Root> roots = find_roots(model.ladder, SearchRegion{r, true, std::nullopt});
    e.terms = ruin_terms(model.ladder, roots, IntegrandKind::ruin_discrete, ctx, true);
    e.x_min = scan_x_min(e);
    return e;
}

double cramer_lundberg_constant(const ContinuousRiskModel& model) {
    // C = (c - alpha m) / (alpha E[Z e^{kappa Z}] - c), evaluated through the
    // same closed form as expansion term 0 so the two paths agree exactly.
    RuinContext ctx = make_context(model.kappa, model.alpha / model.premium, model.claim_mean,
                                   &model.claims);
    Root z0{0.0, 1, model.ladder.mgf_derivative(0.0, 1), std::nullopt};
    return residue_simple(model.ladder, z0, IntegrandKind::ruin_continuous, &ctx).real();
}

double cramer_lundberg_constant(const DiscreteRiskModel& model) {
    if (model.claim_mean <= 0.0) return 0.0;
    RuinContext ctx = make_context(model.kappa, 0.0, model.claim_mean, &model.claims);
    Root z0{0.0, 1, model.ladder.mgf_derivative(0.0, 1), std::nullopt};
    return residue_simple(model.ladder, z0, IntegrandKind::ruin_discrete, &ctx).real();
}

MarginalTwoTerm MarginalTwoTerm::from(const ContinuousRiskModel& model) {
    MarginalTwoTerm two;
    two.kappa = model.kappa;
    two.c0 = cramer_lundberg_constant(model);

    // locate the first non-zero root of the tilted transform, growing the
    // strip; rational transforms with a single root have none (C1 = 0)
    double r = std::max(1.0, 2.0 * model.kappa);
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::vector<Root> roots = find_roots(model.ladder, SearchRegion{r, false, std::nullopt});
        const Root* best = nullptr;
        for (const Root& root : roots) {
            if (std::abs(root.location) < 1e-12 || root.location.imag() < 0) continue;
            if (!best || root.location.real() < best->location.real()) best = &root;
        }
        if (best) {
            if (best->multiplicity != 1)
                throw Error("MarginalTwoTerm: subdominant root is not simple");
            two.z1 = best->location;
            RuinContext ctx = make_context(model.kappa, model.alpha / model.premium,
                                           model.claim_mean, &model.claims);
            Complex c = residue_simple(model.ladder, *best, IntegrandKind::ruin_continuous, &ctx);
            two.c1 = (best->location.imag() > 0) ? 2.0 * c : c;
            return two;
        }
        r *= 2;
        if (r > 512) break;
    }
    return two; // no subdominant root found: C1 = 0
}

BivariateModel BivariateModel::build(ContinuousRiskModel m1, ContinuousRiskModel m2, double q) {
    if (q <= 0) throw Error("BivariateModel: q = x2/x1 must be > 0");
    MarginalTwoTerm t1 = MarginalTwoTerm::from(m1);
    MarginalTwoTerm t2 = MarginalTwoTerm::from(m2);
    return BivariateModel{std::move(m1), std::move(m2), q, t1, t2};
}

double BivariateOutcome::evaluate(double x) const {
    return (coeff0 * std::exp(-d0 * x)).real() + (coeff1 * std::exp(-d1 * x)).real();
}

BivariateOutcome ruin_bivariate(const BivariateModel& model) {
    struct Candidate {
        std::string name;
        Complex exponent;
        Complex coeff;
    };
    const double q = model.q;
    std::vector<Candidate> cands;
    cands.push_back({"C0_1*exp(-kappa1*x)", Complex(model.two1.kappa, 0.0),
                     Complex(model.two1.c0, 0.0)});
    cands.push_back({"C0_2*exp(-q*kappa2*x)", Complex(q * model.two2.kappa, 0.0),
                     Complex(model.two2.c0, 0.0)});
    if (model.two1.z1 && std::abs(model.two1.c1) > 0)
        cands.push_back({"C1_1*exp(-(kappa1+z1_1)*x)", model.two1.kappa + *model.two1.z1,
                         model.two1.c1});
    if (model.two2.z1 && std::abs(model.two2.c1) > 0)
        cands.push_back({"C1_2*exp(-q*(kappa2+z1_2)*x)", q * (model.two2.kappa + *model.two2.z1),
                         model.two2.c1});

    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return a.exponent.real() < b.exponent.real();
    });
    if (cands.size() < 2) throw Error("ruin_bivariate: fewer than two candidate terms");

    BivariateOutcome out;
    out.d0 = cands[0].exponent;
    out.coeff0 = cands[0].coeff;
    out.d1 = cands[1].exponent;
    out.coeff1 = cands[1].coeff;
    out.region = cands[0].name + " , " + cands[1].name;
    out.orderings.push_back(out.region);

    // ties between real exponents mark a boundary between dominance regions
    if (cands.size() >= 2 && std::abs(cands[0].exponent.real() - cands[1].exponent.real()) < 1e-10) {
        out.degenerate = true;
        out.orderings.push_back(cands[1].name + " , " + cands[0].name);
    } else if (cands.size() >= 3 &&
               std::abs(cands[1].exponent.real() - cands[2].exponent.real()) < 1e-10) {
        out.degenerate = true;
        out.orderings.push_back(cands[0].name + " , " + cands[2].name);
    }
    return out;
}

} // namespace renewal
