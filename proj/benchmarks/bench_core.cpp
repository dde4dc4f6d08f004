#include <benchmark/benchmark.h>

#include <cmath>

#include "lznoise/dynamics.hpp"
#include "lznoise/hierarchy.hpp"
#include "lznoise/noise.hpp"
#include "lznoise/rng.hpp"

using namespace lzn;

static void BM_Rk4Step(benchmark::State& state) {
    SystemParams p{1.0, 1.0, 0.5};
    StateVector s;
    s.b = 1.0;
    double t = -20.0;
    for (auto _ : state) {
        rk4_step(s, p, t, 1e-3, 0.0, 0.0);
        t += 1e-3;
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_Rk4Step);

static void BM_NormalDraw(benchmark::State& state) {
    RngStream rng(1, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(rng.next_normal());
}
BENCHMARK(BM_NormalDraw);

static void BM_OuPathGen(benchmark::State& state) {
    NoiseParams np{1.0, 1.0};
    TimeGrid grid{-40.0, 40.0, state.range(0)};
    NoisePath path;
    std::uint64_t stream = 0;
    for (auto _ : state) {
        RngStream rng(1, stream++);
        generate_path(path, np, grid, rng);
        benchmark::DoNotOptimize(path.values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OuPathGen)->Arg(1 << 12)->Arg(1 << 16);

static void BM_EvolveSingleQuiet(benchmark::State& state) {
    SystemParams p{1.0, 1.0, 0.5};
    const TimeGrid grid = default_grid(p, {});
    for (auto _ : state)
        benchmark::DoNotOptimize(evolve_single(p, grid).probability);
    state.SetItemsProcessed(state.iterations() * grid.steps);
}
BENCHMARK(BM_EvolveSingleQuiet);

static void BM_EvolveSingleNoisy(benchmark::State& state) {
    SystemParams p{1.0, 1.0, 0.5};
    NoiseParams np{1.0, 2.0};
    const TimeGrid grid = default_grid(p, np);
    NoisePath path;
    std::uint64_t stream = 0;
    for (auto _ : state) {
        RngStream rng(1, stream++);
        generate_path(path, np, grid, rng);
        benchmark::DoNotOptimize(evolve_single(p, grid, &path).probability);
    }
    state.SetItemsProcessed(state.iterations() * grid.steps);
}
BENCHMARK(BM_EvolveSingleNoisy);

static void BM_EnsembleWorkers(benchmark::State& state) {
    SystemParams p{1.0, 1.0, 0.5};
    NoiseParams np{0.5, 1.0};
    GridPolicy pol{};
    pol.window_scale = 0.25;
    pol.step_scale = 2.0;
    const TimeGrid grid = default_grid(p, np, pol);
    const int workers = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const EnsembleResult r =
            ensemble_average(p, np, grid, 64, 1, 0, workers);
        benchmark::DoNotOptimize(r.mean);
    }
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_EnsembleWorkers)->Arg(1)->Arg(2)->Arg(4);

static void BM_HierarchyAttempt(benchmark::State& state) {
    SystemParams p{1.0, 1.0, 0.5};
    NoiseParams np{1.0, 2.0};
    HierarchyOptions opt;
    opt.n_start = static_cast<int>(state.range(0));
    opt.n_cap = opt.n_start;
    for (auto _ : state)
        benchmark::DoNotOptimize(evolve_hierarchy(p, np, {}, opt).probability);
}
BENCHMARK(BM_HierarchyAttempt)->Arg(4)->Arg(12)->Arg(20);

BENCHMARK_MAIN();
