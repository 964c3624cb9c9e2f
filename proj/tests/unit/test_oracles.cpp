#include <doctest.h>

#include <cmath>

#include "renewal/oracles.hpp"
#include "test_helpers.hpp"

using namespace renewal;

TEST_SUITE_BEGIN("oracles");

TEST_CASE("renewal_mass_exact basics") {
    // geometric(1/2) on {1,2,...}: u_0 = 1, u_k = 1/mu = 1/2 afterwards
    auto u = renewal_mass_exact(Distribution::geometric(0.5).pmf_table(1e-15), 30);
    CHECK(u[0] == doctest::Approx(1.0));
    for (int k = 1; k <= 30; ++k) CHECK(u[k] == doctest::Approx(0.5).epsilon(1e-12));

    // deterministic unit step
    auto v = renewal_mass_exact({0.0, 1.0}, 10);
    for (double x : v) CHECK(x == doctest::Approx(1.0));

    CHECK_THROWS_AS(renewal_mass_exact({1.0}, 5), MassAtZeroOne);
}

TEST_CASE("grid renewal solver against closed forms") {
    auto grid = renewal_grid_continuous(Distribution::exponential(2.0), 5.0, 1e-3);
    for (int i : {1000, 3000, 5000})
        CHECK(grid[i] == doctest::Approx(1.0 + 2.0 * i * 1e-3).epsilon(1e-8));

    auto erl = renewal_grid_continuous(Distribution::erlang(2, 2.0), 3.0, 1e-3);
    for (int i : {500, 1500, 3000}) {
        double x = i * 1e-3;
        CHECK(erl[i] == doctest::Approx(x + 0.75 + 0.25 * std::exp(-4 * x)).epsilon(1e-7));
    }
}

TEST_CASE("grid Richardson pairing pins uniform01 at x=3 within its own error bar") {
    auto rich = renewal_grid_richardson(Distribution::uniform01(), 3.0, 1e-3);
    double u3 = rich.value.back();
    // frozen regression value from the two-resolution solve
    CHECK(u3 == doctest::Approx(6.6665656).epsilon(1e-6));
    CHECK(rich.error_estimate.back() < 1e-6);
    auto coarse = renewal_grid_continuous(Distribution::uniform01(), 3.0, 1e-3);
    CHECK(std::abs(coarse.back() - u3) <= 4.5 * std::max(rich.error_estimate.back(), 1e-9) + 1e-7);
}

TEST_CASE("phase-type renewal density: three routes for the Erlang embedding") {
    for (double x : {0.1, 0.5, 1.0, 2.0}) {
        double pt = phase_type_renewal_density({1.0, 0.0}, {{-2, 2}, {0, -2}}, x);
        CHECK(pt == doctest::Approx(1.0 - std::exp(-4 * x)).epsilon(1e-10));
    }
    // x = 0: alpha . s >= 0
    CHECK(phase_type_renewal_density({1.0, 0.0}, {{-2, 2}, {0, -2}}, 0.0) ==
          doctest::Approx(0.0));
    CHECK_THROWS_AS(phase_type_renewal_density({0.5, 0.0}, {{-2, 2}, {0, -2}}, 1.0), Error);
}

TEST_CASE("discrete ruin DP: pinned cases and the defining equation residual") {
    auto zero = ruin_discrete_dp(Distribution::discrete_pmf({1.0}), 10);
    for (double p : zero) CHECK(p == 0.0);

    auto claims = Distribution::discrete_pmf({0.7, 0.0, 0.3});
    auto psi = ruin_discrete_dp(claims, 40);
    double kappa = std::log(7.0 / 3.0);
    CHECK(psi[30] * std::exp(kappa * 30) == doctest::Approx(13.0 / 7.0).epsilon(1e-3));

    // the solution satisfies psi(x) = sum psi(x-k) l(k) + Lbar(x) to 1e-12
    std::vector<double> l;
    for (int k = 0; k <= 45; ++k) l.push_back(claims.tail(k));
    for (int x = 0; x <= 40; ++x) {
        double rhs = 0;
        for (int k = 0; k <= x; ++k) rhs += psi[x - k] * l[k];
        for (std::size_t y = x; y < l.size(); ++y) rhs += l[y];
        CHECK(std::abs(psi[x] - rhs) < 1e-12);
    }
}

TEST_CASE("continuous ruin grid solver: exponential claims closed form") {
    auto model = ContinuousRiskModel::build(Distribution::exponential(3.0), 1.0, 1.0);
    auto psi = ruin_grid_continuous(model, 6.0, 5e-4);
    for (double x : {0.0, 1.0, 3.0, 6.0}) {
        double expect = (1.0 / 3.0) * std::exp(-2.0 * x);
        double got = psi[std::size_t(std::llround(x / 5e-4))];
        CHECK(std::abs(got - expect) <= std::max(1e-7, 2e-4 * expect));
    }
}

TEST_CASE("Monte Carlo: reproducibility and thread independence") {
    auto model = ContinuousRiskModel::build(Distribution::exponential(3.0), 1.0, 1.0);
    McEstimate a = ruin_mc_continuous(model, 1.0, 20000, 1e7, 7);
    McEstimate b = ruin_mc_continuous(model, 1.0, 20000, 1e7, 7);
    CHECK(a.value == b.value); // bitwise
    McEstimate c = ruin_mc_continuous(model, 1.0, 20000, 1e7, 8);
    CHECK(a.value != c.value);

    // forcing a single worker must not change the estimate
    setenv("RENEWAL_THREADS", "1", 1);
    McEstimate d = ruin_mc_continuous(model, 1.0, 20000, 1e7, 7);
    unsetenv("RENEWAL_THREADS");
    CHECK(a.value == d.value);
}

TEST_CASE("Monte Carlo ruin agrees with the closed form at 3 sigma") {
    auto model = ContinuousRiskModel::build(Distribution::exponential(3.0), 1.0, 1.0);
    McEstimate at1 = ruin_mc_continuous(model, 1.0, 100000, 1e7, 42);
    double truth1 = (1.0 / 3.0) * std::exp(-2.0);
    CHECK(std::abs(at1.value - truth1) <= 3 * at1.std_err);

    McEstimate at0 = ruin_mc_continuous(model, 0.0, 100000, 1e7, 43);
    CHECK(std::abs(at0.value - 1.0 / 3.0) <= 3 * at0.std_err);
}

TEST_CASE("renewal Monte Carlo against closed forms and the grid oracle") {
    McEstimate expo = renewal_mc(Distribution::exponential(2.0), 5.0, 60000, 11);
    CHECK(std::abs(expo.value - 11.0) <= 4 * expo.std_err);

    McEstimate uni = renewal_mc(Distribution::uniform01(), 3.0, 60000, 12);
    auto rich = renewal_grid_richardson(Distribution::uniform01(), 3.0, 1e-3);
    CHECK(std::abs(uni.value - rich.value.back()) <= 4 * uni.std_err + 1e-5);

    // deterministic unit steps: U(4.5) = 5 with zero variance
    McEstimate det = renewal_mc(Distribution::discrete_pmf({0.0, 1.0}), 4.5, 2000, 13);
    CHECK(det.value == doctest::Approx(5.0));
    CHECK(det.std_err == doctest::Approx(0.0));
}

TEST_CASE("oracle pairs agree within combined error models") {
    // lattice mass recursion vs renewal Monte Carlo (cumulative counts)
    auto nb = Distribution::negative_binomial(0.4, 2);
    auto u = renewal_mass_exact(nb.pmf_table(1e-15), 12);
    double u_cum = 0;
    for (int k = 0; k <= 10; ++k) u_cum += u[k];
    McEstimate mc = renewal_mc(nb, 10.0, 80000, 99);
    CHECK(std::abs(mc.value - u_cum) <= 4 * mc.std_err);

    // phase-type closed form vs the grid solve (renewal density vs dU/dx)
    auto me = Distribution::matrix_exponential({0.25, 0.75, 0.0},
                                               {{-1, 1, 0}, {0, -1, 1}, {0, 0, -1}});
    auto grid = renewal_grid_continuous(me, 3.0, 5e-4);
    for (double x : {1.0, 2.0}) {
        std::size_t i = std::size_t(std::llround(x / 5e-4));
        double du = (grid[i + 1] - grid[i - 1]) / 1e-3;
        double pt = phase_type_renewal_density({0.25, 0.75, 0.0},
                                               {{-1, 1, 0}, {0, -1, 1}, {0, 0, -1}}, x);
        CHECK(du == doctest::Approx(pt).epsilon(1e-4));
    }
}

TEST_SUITE_END();
