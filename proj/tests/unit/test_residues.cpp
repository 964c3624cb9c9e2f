#include <doctest.h>

#include <cmath>

#include "renewal/distribution.hpp"
#include "renewal/residues.hpp"
#include "renewal/rootfinder.hpp"
#include "test_helpers.hpp"

using namespace renewal;

namespace {

Root make_root(const Distribution& model, Complex z, int mult = 1) {
    return Root{z, mult, model.mgf_derivative(z, 1), std::nullopt};
}

// 3/4 Erlang(2,1) + 1/4 Erlang(3,1): with u = 1 - z the equation g = 1 reads
// (u - 1)(u + 1/2)^2 = 0, so z = 3/2 is an exact double zero of g - 1. Hand
// values there: g'' = -24, g''' = 384, hence A = g''/2 = -12, B = g'''/6 = 64.
struct DoubleRootFixture {
    Distribution model = Distribution::matrix_exponential(
        {0.25, 0.75, 0.0}, {{-1, 1, 0}, {0, -1, 1}, {0, 0, -1}});
    double zstar = 1.5;
    double A = -12.0;
    double B = 64.0;
};

DoubleRootFixture make_double_root_fixture() { return DoubleRootFixture{}; }

} // namespace

TEST_SUITE_BEGIN("residues");

TEST_CASE("simple-pole coefficients: pinned closed forms") {
    auto erl = Distribution::erlang(2, 2.0);
    Root z4 = make_root(erl, Complex(4.0, 0.0));
    CHECK(residue_simple(erl, z4, IntegrandKind::nonlattice_v).real() ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(residue_simple(erl, z4, IntegrandKind::density).real() ==
          doctest::Approx(-1.0).epsilon(1e-12));

    // uniform: g'(z_j) = 1, so the v coefficient is -1/z_j
    auto uni = Distribution::uniform01();
    Complex z1(2.0888430156130444, 7.461489285654254);
    Root r1 = make_root(uni, z1);
    CHECK(std::abs(r1.g_prime - 1.0) < 1e-10);
    Complex coeff = residue_simple(uni, r1, IntegrandKind::nonlattice_v);
    CHECK(std::abs(coeff - (-1.0 / z1)) < 1e-12);
}

TEST_CASE("residue_simple rejects what it must") {
    auto erl = Distribution::erlang(2, 2.0);
    Root multi{Complex(4.0, 0.0), 2, Complex(0.0), std::nullopt};
    CHECK_THROWS_AS(residue_simple(erl, multi, IntegrandKind::density), NotSimple);
    Root zero = make_root(erl, Complex(0.0));
    CHECK_THROWS_AS(residue_simple(erl, zero, IntegrandKind::nonlattice_v), DegenerateFactor);
}

TEST_CASE("residue_numeric agrees with the closed form and the z0 density term") {
    auto erl = Distribution::erlang(2, 2.0);
    double x = 1.0;
    Complex numeric = residue_numeric(erl, Complex(4.0, 0.0), IntegrandKind::density, x);
    Complex closed = residue_simple(erl, make_root(erl, Complex(4.0, 0.0)),
                                    IntegrandKind::density) *
                     std::exp(-4.0 * x);
    CHECK(std::abs(numeric - closed) < 1e-10);

    // density term at z0 is 1/mu: exponential(2) gives 2 at any x
    auto expo = Distribution::exponential(2.0);
    Complex at0 = residue_numeric(expo, Complex(0.0), IntegrandKind::density, 1.0);
    CHECK(std::abs(at0 - 2.0 * std::exp(-0.0)) < 1e-10);
    CHECK(at0.real() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("double-root fixture: numeric residue equals the analytic Laurent coefficient") {
    DoubleRootFixture fx = make_double_root_fixture();
    const Distribution& model = fx.model;
    const double zs = fx.zstar;

    // genuine double zero of g - 1 at z = 3/2
    CHECK(std::abs(model.mgf(Complex(zs, 0.0)) - 1.0) < 1e-12);
    CHECK(std::abs(model.mgf_derivative(Complex(zs, 0.0), 1)) < 1e-12);
    CHECK(count_zeros(model, Rect{zs - 0.2, zs + 0.2, -0.2, 0.2}) == 2);

    // library derivatives agree with the hand values behind A and B
    CHECK(model.mgf_derivative(Complex(zs, 0.0), 2).real() ==
          doctest::Approx(2 * fx.A).epsilon(1e-10));
    CHECK(model.mgf_derivative(Complex(zs, 0.0), 3).real() ==
          doctest::Approx(6 * fx.B).epsilon(1e-9));

    // analytic: with g-1 = A u^2 + B u^3 + ..., u = z - z*,
    // Res(e^{-xz}/(z(1-g)); z*) = e^{-x z*} (x + 1/z* + B/A) / (A z*)
    for (double x : {0.5, 1.0, 2.0}) {
        double analytic = std::exp(-x * zs) * (x + 1.0 / zs + fx.B / fx.A) / (fx.A * zs);
        Complex numeric = residue_numeric(model, Complex(zs, 0.0), IntegrandKind::nonlattice_v, x);
        CHECK(numeric.real() == doctest::Approx(analytic).epsilon(1e-9));
        CHECK(std::abs(numeric.imag()) < 1e-10);
    }

    // principal-part route assembles the same polynomial-in-x term
    std::vector<Complex> b =
        principal_part(model, Complex(zs, 0.0), 2, IntegrandKind::nonlattice_v);
    for (double x : {0.5, 2.0}) {
        double via_pp = std::exp(-x * zs) * (b[0] - b[1] * x).real();
        double analytic = std::exp(-x * zs) * (x + 1.0 / zs + fx.B / fx.A) / (fx.A * zs);
        CHECK(via_pp == doctest::Approx(analytic).epsilon(1e-9));
    }

    // find_roots reads the multiplicity off the winding counts
    auto roots = find_roots(model, SearchRegion{2.5, false, std::nullopt});
    bool saw_double = false;
    for (const Root& r : roots)
        if (std::abs(r.location - Complex(zs, 0.0)) < 1e-6 && r.multiplicity == 2)
            saw_double = true;
    CHECK(saw_double);
}

TEST_CASE("isolation: a crowding zero raises PoleTooClose") {
    // perturbing the double-root mixture splits z = 3/2 into the pair
    // 1.5 -+ 0.05i (u^2 + u + 0.2525), separation 0.1 inside the 0.1 cap
    auto model = Distribution::matrix_exponential({0.2525, 0.7475, 0.0},
                                                  {{-1, 1, 0}, {0, -1, 1}, {0, 0, -1}});
    Complex near_pair(1.5, 0.05);
    CHECK(std::abs(model.mgf(near_pair) - 1.0) < 1e-10);
    CHECK_THROWS_AS(residue_numeric(model, near_pair, IntegrandKind::density, 1.0),
                    PoleTooClose);
    // a radius hint inside the gap restores the closed form
    Root r{near_pair, 1, model.mgf_derivative(near_pair, 1), std::nullopt};
    Complex ok = residue_numeric(model, near_pair, IntegrandKind::density, 1.0, 0.02);
    Complex closed = residue_simple(model, r, IntegrandKind::density) * std::exp(-near_pair);
    CHECK(std::abs(ok - closed) < 1e-8);
}

TEST_CASE("property: conjugate poles carry conjugate residues") {
    auto uni = Distribution::uniform01();
    auto roots = find_roots(uni, SearchRegion{3.2, false, std::nullopt});
    for (const Root& r : roots) {
        if (r.location.imag() <= 0) continue;
        Complex up = residue_simple(uni, r, IntegrandKind::nonlattice_v);
        Root conj_root{std::conj(r.location), 1, std::conj(r.g_prime), std::nullopt};
        Complex down = residue_simple(uni, conj_root, IntegrandKind::nonlattice_v);
        CHECK(std::abs(up - std::conj(down)) < 1e-12);
        // and numerically
        Complex nup = residue_numeric(uni, r.location, IntegrandKind::nonlattice_v, 1.0, {},
                                      nullptr, &roots);
        Complex ndown = residue_numeric(uni, std::conj(r.location), IntegrandKind::nonlattice_v,
                                        1.0, {}, nullptr, &roots);
        CHECK(std::abs(nup - std::conj(ndown)) < 1e-10);
    }
}

TEST_CASE("property: simple and numeric residues agree on every bundled simple root") {
    struct Case {
        Distribution model;
        double r0;
    };
    std::vector<Case> cases;
    cases.push_back({Distribution::erlang(2, 2.0), 5.0});
    cases.push_back({Distribution::hyperexponential({0.3, 0.7}, {1.0, 3.0}), 2.5});
    cases.push_back({Distribution::uniform01(), 3.0});
    cases.push_back({Distribution::negative_binomial(0.4, 3), 2.0});
    cases.push_back({Distribution::geometric(0.5), 0.6});
    for (const Case& cs : cases) {
        SearchRegion region{cs.r0, cs.model.lattice(), std::nullopt};
        auto roots = find_roots(cs.model, region);
        IntegrandKind kind =
            cs.model.lattice() ? IntegrandKind::mass : IntegrandKind::density;
        for (const Root& r : roots) {
            if (r.multiplicity != 1) continue;
            double x = 0.7;
            Complex closed = residue_simple(cs.model, r, kind) * std::exp(-x * r.location);
            Complex numeric = residue_numeric(cs.model, r.location, kind, x, {}, nullptr, &roots);
            CHECK(std::abs(closed - numeric) <= 1e-9 * std::max(1.0, std::abs(closed)));
        }
    }
}

TEST_CASE("property: trapezoid value invariant under radius halving") {
    auto erl = Distribution::erlang(2, 2.0);
    for (double radius : {0.08, 0.04, 0.02}) {
        Complex v = residue_numeric(erl, Complex(4.0, 0.0), IntegrandKind::density, 1.0, radius);
        Complex v2 =
            residue_numeric(erl, Complex(4.0, 0.0), IntegrandKind::density, 1.0, radius / 2);
        CHECK(std::abs(v - v2) < 1e-10);
    }
}

TEST_SUITE_END();
