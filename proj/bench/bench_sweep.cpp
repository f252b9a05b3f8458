// Serial reference vs OpenMP grid kernel on the (Delta, M) sweep grid.

#include <benchmark/benchmark.h>

#include "diamag/sweep.hpp"

using namespace diamag;

namespace {

std::vector<LatticeConfig> sweep_grid(std::size_t max_sites) {
    std::vector<LatticeConfig> out;
    for (double delta : {0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0})
        for (std::size_t m = 40; m <= max_sites; m *= 2) {
            LatticeConfig c;
            c.sites = m;
            c.delta = delta;
            out.push_back(c);
        }
    return out;
}

void BM_GridSerial(benchmark::State& state) {
    const auto grid = sweep_grid(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_grid_serial(grid, {}));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}

void BM_GridParallel(benchmark::State& state) {
    const auto grid = sweep_grid(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_grid_parallel(grid, {}));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}

void BM_NormalModes(benchmark::State& state) {
    LatticeConfig c;
    c.sites = static_cast<std::size_t>(state.range(0));
    c.delta = 0.5;
    const QuadraticModel model = build_chain(c);
    for (auto _ : state) benchmark::DoNotOptimize(normal_modes(model));
}

}  // namespace

BENCHMARK(BM_GridSerial)->Arg(320)->Arg(640)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridParallel)->Arg(320)->Arg(640)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NormalModes)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
