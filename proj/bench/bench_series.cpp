#include <benchmark/benchmark.h>

#include "curvlab/functionals.hpp"

namespace {

using namespace curvlab;

const PotentialSolution& perturbed() {
    static const PotentialSolution sol = PotentialSolution::solve(to_warped(perturbed_schwarzschild(1.0, 0.5, 1.0)));
    return sol;
}

void BM_SeriesSerial(benchmark::State& state) {
    const auto grid = perturbed().default_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(functionals::evaluate_series_serial(perturbed(), grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SeriesParallel(benchmark::State& state) {
    const auto grid = perturbed().default_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(functionals::evaluate_series(perturbed(), grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CumulativeSerial(benchmark::State& state) {
    const auto grid = perturbed().default_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(functionals::cumulative_r1_b1_serial(perturbed(), grid));
}

void BM_CumulativeParallel(benchmark::State& state) {
    const auto grid = perturbed().default_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(functionals::cumulative_r1_b1(perturbed(), grid));
}

}  // namespace

BENCHMARK(BM_SeriesSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeriesParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CumulativeSerial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CumulativeParallel)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
