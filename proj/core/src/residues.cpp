#include "renewal/residues.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "law.hpp"

namespace renewal {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

bool is_ruin(IntegrandKind k) {
    return k == IntegrandKind::ruin_continuous || k == IntegrandKind::ruin_discrete;
}

// x-free factor h(z); written via the witness so that poles of g are healed
// (1/(1-g) = -den/witness).
Complex xfree_factor(const Distribution& model, IntegrandKind kind, const RuinContext* ruin,
                     Complex z) {
    const Complex phi = model.witness(z);
    const Complex den = model.law().den(z);
    switch (kind) {
        case IntegrandKind::nonlattice_v:
            return -den / (z * phi);
        case IntegrandKind::lattice_v:
            return -den / ((std::exp(z) - 1.0) * phi);
        case IntegrandKind::density:
        case IntegrandKind::mass:
            return den / phi;
        case IntegrandKind::ruin_continuous:
            return ruin->continuous_factor() * (-den) / (phi * (z + ruin->kappa));
        case IntegrandKind::ruin_discrete: {
            const Complex e = std::exp(ruin->kappa + z);
            const Complex num = phi + den;
            return (ruin->claim_mean * den - num * e) / (phi * (1.0 - e));
        }
    }
    return 0.0;
}

std::vector<Complex> kind_singularities(IntegrandKind kind, const RuinContext* ruin) {
    switch (kind) {
        case IntegrandKind::nonlattice_v:
            return {Complex(0.0)};
        case IntegrandKind::lattice_v:
        case IntegrandKind::mass:
            return {Complex(0.0), Complex(0.0, kTwoPi), Complex(0.0, -kTwoPi)};
        case IntegrandKind::density:
            return {};
        case IntegrandKind::ruin_continuous:
            return {Complex(-ruin->kappa, 0.0)};
        case IntegrandKind::ruin_discrete:
            return {Complex(-ruin->kappa, 0.0), Complex(-ruin->kappa, kTwoPi),
                    Complex(-ruin->kappa, -kTwoPi)};
    }
    return {};
}

// mass/density of other singular points only matters for the contour radius;
// lattice_v excludes z=0 as pole of 1/(e^z-1) even though the v-sum skips it.
double safe_radius(Complex pole, IntegrandKind kind, const RuinContext* ruin,
                   std::optional<double> hint, const std::vector<Root>* all_roots) {
    double r = hint.value_or(0.1);
    r = std::min(r, 0.1);
    for (Complex s : kind_singularities(kind, ruin)) {
        double d = std::abs(pole - s);
        if (d > 1e-14) r = std::min(r, 0.45 * d);
    }
    if (all_roots) {
        for (const Root& other : *all_roots) {
            double d = std::abs(pole - other.location);
            if (d > 1e-12) r = std::min(r, 0.45 * d);
        }
    }
    return r;
}

Complex circle_integral(const std::function<Complex(Complex)>& f, Complex centre, double radius) {
    Complex prev;
    for (int n = 64; n <= 4096; n *= 2) {
        Complex acc = 0.0;
        for (int j = 0; j < n; ++j) {
            double theta = kTwoPi * j / n;
            Complex w = std::polar(radius, theta);
            acc += f(centre + w) * w;
        }
        acc /= double(n);
        if (n > 64 && std::abs(acc - prev) <= 1e-10 * std::max(1.0, std::abs(acc))) return acc;
        prev = acc;
    }
    throw NoConvergence("residue quadrature did not stabilise at 4096 nodes");
}

} // namespace

Complex residue_simple(const Distribution& model, const Root& root, IntegrandKind kind,
                       const RuinContext* ruin) {
    (void)model; // the closed forms below only need the root data and context
    if (root.multiplicity != 1)
        throw NotSimple("residue_simple: root has multiplicity " +
                        std::to_string(root.multiplicity));
    const Complex z = root.location;
    const Complex gp = root.g_prime;
    switch (kind) {
        case IntegrandKind::nonlattice_v:
            if (std::abs(z) < 1e-12)
                throw DegenerateFactor("residue_simple: nonlattice_v coefficient at z=0");
            return -1.0 / (z * gp);
        case IntegrandKind::lattice_v: {
            const Complex e = std::exp(z) - 1.0;
            if (std::abs(e) < 1e-12)
                throw DegenerateFactor("residue_simple: lattice_v coefficient at e^z=1");
            return -1.0 / (e * gp);
        }
        case IntegrandKind::density:
        case IntegrandKind::mass:
            return 1.0 / gp;
        case IntegrandKind::ruin_continuous: {
            const Complex w = z + ruin->kappa;
            if (std::abs(w) < 1e-12)
                throw DegenerateFactor("residue_simple: z_j + kappa = 0");
            // (c - alpha m)/(alpha E[Z e^{wZ}] - c); equals the residue form
            // -(am-c)/(c g'(z_j)(z_j+kappa)) via g'(z_j) = ((alpha/c)E - 1)/w.
            const Complex mom = ruin->claims->mgf_derivative(w, 1);
            return (-ruin->continuous_factor()) / (ruin->alpha_over_c * mom - 1.0);
        }
        case IntegrandKind::ruin_discrete: {
            const Complex e = std::exp(ruin->kappa + z);
            if (std::abs(e - 1.0) < 1e-12)
                throw DegenerateFactor("residue_simple: e^{kappa+z_j} = 1");
            const Complex mom = ruin->claims->mgf_derivative(ruin->kappa + z, 1);
            return (ruin->claim_mean - e) / (e - mom);
        }
    }
    return 0.0;
}

Complex residue_numeric(const Distribution& model, Complex pole, IntegrandKind kind, double x,
                        std::optional<double> radius_hint, const RuinContext* ruin,
                        const std::vector<Root>* all_roots) {
    double radius = safe_radius(pole, kind, ruin, radius_hint, all_roots);
    if (radius <= 1e-8)
        throw PoleTooClose("residue_numeric: isolation disk collapsed below 1e-8");
    if (!all_roots) {
        // no root set to measure isolation against: the zero count of g-1 must
        // be the same just outside the contour and at half the radius
        Rect outer{pole.real() - 1.05 * radius, pole.real() + 1.05 * radius,
                   pole.imag() - 1.05 * radius, pole.imag() + 1.05 * radius};
        Rect inner{pole.real() - 0.5 * radius, pole.real() + 0.5 * radius,
                   pole.imag() - 0.5 * radius, pole.imag() + 0.5 * radius};
        if (count_zeros(model, outer) != count_zeros(model, inner))
            throw PoleTooClose("residue_numeric: another zero of g-1 intrudes on the contour");
    }
    const double kappa = is_ruin(kind) ? ruin->kappa : 0.0;
    auto f = [&](Complex z) {
        return std::exp(-x * (z + kappa)) * xfree_factor(model, kind, ruin, z);
    };
    return circle_integral(f, pole, radius);
}

std::vector<Complex> principal_part(const Distribution& model, Complex pole, int order,
                                    IntegrandKind kind, const RuinContext* ruin,
                                    const std::vector<Root>* all_roots) {
    double radius = safe_radius(pole, kind, ruin, std::nullopt, all_roots);
    if (radius <= 1e-8)
        throw PoleTooClose("principal_part: isolation disk collapsed below 1e-8");
    std::vector<Complex> b(order);
    for (int i = 1; i <= order; ++i) {
        auto f = [&](Complex z) {
            return xfree_factor(model, kind, ruin, z) * std::pow(z - pole, i - 1);
        };
        b[i - 1] = circle_integral(f, pole, radius);
    }
    return b;
}

} // namespace renewal
