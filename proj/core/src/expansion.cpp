#include "renewal/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "law.hpp"

namespace renewal {

namespace {

constexpr double kPi = M_PI;

bool self_conjugate(const Root& r, bool lattice) {
    return r.location.imag() == 0.0 ||
           (lattice && std::abs(std::abs(r.location.imag()) - kPi) < 1e-9);
}

// Term coefficients p_0..p_{m-1} with term = e^{-x z_j} sum_l p_l x^l.
// The per-kind orientation is already folded into the residue integrands,
// so p_l = (-1)^l b_{l+1} / l! with b the principal part of that factor.
std::vector<Complex> term_coefficients(const Distribution& model, const Root& root,
                                       IntegrandKind kind, const std::vector<Root>& all) {
    if (root.multiplicity == 1) return {residue_simple(model, root, kind)};
    std::vector<Complex> b =
        principal_part(model, root.location, root.multiplicity, kind, nullptr, &all);
    std::vector<Complex> p(root.multiplicity);
    double lfact = 1.0;
    for (int l = 0; l < root.multiplicity; ++l) {
        if (l > 0) lfact *= l;
        p[l] = b[l] * ((l % 2 == 0) ? 1.0 : -1.0) / lfact;
    }
    return p;
}

Expansion build(const Distribution& model, double r0, ExpansionKind ekind) {
    Expansion e;
    e.kind = ekind;
    e.lattice = model.lattice();
    e.r0 = r0;
    MomentSummary mom = model.moments();
    e.mu = mom.mu;
    e.mu2 = mom.mu2;
    e.slope = 1.0 / mom.mu;
    e.intercept = e.lattice ? (mom.mu2 + mom.mu) / (2 * mom.mu * mom.mu)
                            : mom.mu2 / (2 * mom.mu * mom.mu);

    if (!e.lattice) {
        GrowthReport rep = diagnose_growth(model, std::min(r0, 0.9 * mom.mgf_radius), 64.0);
        e.growth_warning = rep.applicable && rep.likely_violation;
    }

    SearchRegion region{r0, e.lattice, std::nullopt};
    std::vector<Root> roots = find_roots(model, region);

    IntegrandKind ikind;
    if (ekind == ExpansionKind::v)
        ikind = e.lattice ? IntegrandKind::lattice_v : IntegrandKind::nonlattice_v;
    else
        ikind = e.lattice ? IntegrandKind::mass : IntegrandKind::density;

    const bool include_zero = (ekind != ExpansionKind::v);
    for (const Root& r : roots) {
        if (std::abs(r.location) < 1e-12 && !include_zero) continue;
        if (r.location.imag() < 0) continue; // conjugate of a stored term
        PairTerm t;
        t.root = r.location;
        t.multiplicity = r.multiplicity;
        t.paired = !self_conjugate(r, e.lattice);
        t.coeff = term_coefficients(model, r, ikind, roots);
        e.terms.push_back(std::move(t));
    }

    if (ekind == ExpansionKind::mass) {
        // u(0) carries the S_0 = 0 renewal atom that the contour shift leaves
        // behind: lim_r (1/2pi) int 1/(1-g(r+i theta)) d theta.
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (double r : {16.0, 24.0, 32.0, 40.0}) {
            const int n = 256;
            Complex acc = 0.0;
            for (int j = 0; j < n; ++j) {
                double theta = -kPi + 2 * kPi * j / n;
                Complex z(r, theta);
                Complex phi = model.witness(z);
                Complex den = model.law().den(z);
                Complex v = -den / phi; // 1/(1-g)
                if (std::isfinite(v.real()) && std::isfinite(v.imag())) acc += v;
            }
            double a = acc.real() / n;
            if (!std::isnan(prev) && std::abs(a - prev) < 1e-11) {
                e.zero_atom = a;
                break;
            }
            prev = a;
            e.zero_atom = a;
        }
        if (std::abs(e.zero_atom) < 1e-12) e.zero_atom = 0.0;
    }
    return e;
}

double term_value(const PairTerm& t, double x) {
    Complex poly = 0.0;
    double xp = 1.0;
    for (const Complex& c : t.coeff) {
        poly += c * xp;
        xp *= x;
    }
    Complex v = std::exp(-x * t.root) * poly;
    return t.paired ? 2.0 * v.real() : v.real();
}

} // namespace

Expansion expand_v(const Distribution& model, double r0) {
    return build(model, r0, ExpansionKind::v);
}

Expansion expand_density(const Distribution& model, double r0) {
    if (model.lattice()) throw Error("expand_density: model is lattice; use expand_mass");
    return build(model, r0, ExpansionKind::density);
}

Expansion expand_mass(const Distribution& model, double r0) {
    if (!model.lattice()) throw Error("expand_mass: model is non-lattice; use expand_density");
    return build(model, r0, ExpansionKind::mass);
}

double evaluate(const Expansion& e, double x) {
    if (x < 0) throw Error("evaluate: x must be >= 0");
    double acc = 0;
    for (const PairTerm& t : e.terms) acc += term_value(t, x);
    if (e.kind == ExpansionKind::mass && x == 0.0) acc += e.zero_atom;
    return acc;
}

double evaluate_renewal_function(const Expansion& e, double x) {
    if (e.kind != ExpansionKind::v)
        throw Error("evaluate_renewal_function: needs a v-kind expansion");
    return e.slope * x + e.intercept + evaluate(e, x);
}

EvalBreakdown evaluate_with_breakdown(const Expansion& e, double x) {
    EvalBreakdown out;
    for (const PairTerm& t : e.terms) {
        out.term_values.push_back(term_value(t, x));
        out.value += out.term_values.back();
    }
    if (e.kind == ExpansionKind::mass && x == 0.0) {
        out.linear_part = e.zero_atom;
        out.value += e.zero_atom;
    }
    out.remainder_scale = std::exp(-e.r0 * x);
    return out;
}

ExactModeReport exact_mode_check(const Distribution& model, Expansion& e) {
    ExactModeReport rep;
    const Kind k = model.kind();
    if (model.lattice()) {
        rep.structurally_eligible = true;
    } else {
        switch (k) {
            case Kind::exponential:
            case Kind::erlang:
            case Kind::hyperexponential:
            case Kind::matrix_exponential:
                rep.structurally_eligible = true;
                break;
            case Kind::tilted_ladder_continuous:
                // rational iff the underlying claim transform is rational
                rep.structurally_eligible = !model.poles().empty();
                break;
            default:
                rep.structurally_eligible = false;
        }
        if (!rep.structurally_eligible)
            rep.note = "transform is entire but not rational: no meromorphic-decay guarantee";
    }

    const auto& law = model.law();
    for (double r : {10.0, 20.0, 40.0, 80.0}) {
        double sup = 0;
        if (model.lattice()) {
            const int n = 257;
            for (int j = 0; j < n; ++j) {
                double theta = -kPi + 2 * kPi * j / (n - 1);
                double v = std::exp(-r - law.log_abs_one_minus_g(Complex(r, theta)));
                if (std::isfinite(v)) sup = std::max(sup, v);
            }
        } else {
            for (int j = 0; j < 640; ++j) {
                double theta = (j < 512) ? 50.0 * j / 512.0
                                         : 50.0 * std::pow(200.0, (j - 512) / 128.0);
                double v = std::exp(-law.log_abs_one_minus_g(Complex(r, theta))) / r;
                if (std::isfinite(v)) sup = std::max(sup, v);
            }
        }
        rep.samples.emplace_back(r, sup);
    }
    bool decaying = true;
    for (std::size_t i = 1; i < rep.samples.size(); ++i)
        if (rep.samples[i].second >= rep.samples[i - 1].second) decaying = false;
    // rational transforms decay like 1/r along the sampled abscissas, which
    // cannot reach 1e-3 by r=80; a sustained 1/r-rate fall counts as decay
    bool low_enough = rep.samples.back().second < 1e-3 ||
                      rep.samples.back().second <= 0.25 * rep.samples.front().second;
    rep.exact = rep.structurally_eligible && decaying && low_enough;
    e.exact = rep.exact;
    return rep;
}

} // namespace renewal
