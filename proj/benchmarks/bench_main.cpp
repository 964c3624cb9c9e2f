#include <benchmark/benchmark.h>

#include "renewal/expansion.hpp"
#include "renewal/oracles.hpp"
#include "renewal/ruin.hpp"

using namespace renewal;

static void BM_MgfUniform(benchmark::State& state) {
    auto uni = Distribution::uniform01();
    Complex z(1.7, 9.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(uni.mgf(z));
        z += Complex(1e-9, 0);
    }
}
BENCHMARK(BM_MgfUniform);

static void BM_MgfMatrixExponential(benchmark::State& state) {
    auto me = Distribution::matrix_exponential({0.25, 0.75, 0.0},
                                               {{-1, 1, 0}, {0, -1, 1}, {0, 0, -1}});
    Complex z(0.4, 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(me.mgf(z));
        z += Complex(1e-9, 0);
    }
}
BENCHMARK(BM_MgfMatrixExponential);

static void BM_CountZerosUniform(benchmark::State& state) {
    auto uni = Distribution::uniform01();
    Rect rect{-0.05, 3.5, -0.05, double(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(count_zeros(uni, rect));
}
BENCHMARK(BM_CountZerosUniform)->Arg(16)->Arg(64)->Arg(256);

static void BM_FindRootsUniform(benchmark::State& state) {
    auto uni = Distribution::uniform01();
    for (auto _ : state) {
        auto roots = find_roots(uni, SearchRegion{3.2, false, std::nullopt});
        benchmark::DoNotOptimize(roots);
    }
}
BENCHMARK(BM_FindRootsUniform);

static void BM_ExpandMassNegBinomial(benchmark::State& state) {
    auto nb = Distribution::negative_binomial(0.4, 3);
    for (auto _ : state) {
        Expansion mass = expand_mass(nb, 2.0);
        benchmark::DoNotOptimize(evaluate(mass, 25.0));
    }
}
BENCHMARK(BM_ExpandMassNegBinomial);

static void BM_RenewalMassExact(benchmark::State& state) {
    auto pmf = Distribution::negative_binomial(0.4, 3).pmf_table(1e-15);
    for (auto _ : state) {
        auto u = renewal_mass_exact(pmf, int(state.range(0)));
        benchmark::DoNotOptimize(u);
    }
}
BENCHMARK(BM_RenewalMassExact)->Arg(64)->Arg(512);

static void BM_GridRenewalSolve(benchmark::State& state) {
    auto erl = Distribution::erlang(2, 2.0);
    double h = 1.0 / double(state.range(0));
    for (auto _ : state) {
        auto u = renewal_grid_continuous(erl, 4.0, h);
        benchmark::DoNotOptimize(u);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GridRenewalSolve)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

static void BM_RuinMcExponentialClaims(benchmark::State& state) {
    auto model = ContinuousRiskModel::build(Distribution::exponential(3.0), 1.0, 1.0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        McEstimate mc = ruin_mc_continuous(model, 1.0, std::size_t(state.range(0)), 1e7, seed++);
        benchmark::DoNotOptimize(mc);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RuinMcExponentialClaims)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
