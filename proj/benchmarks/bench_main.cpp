#include "occflow/lov.hpp"
#include "occflow/occupation.hpp"
#include "occflow/rng.hpp"
#include "occflow/sde.hpp"
#include "occflow/stopping.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace occflow;

static void BM_PhiloxNormal(benchmark::State& state) {
    const CounterRng rng(1);
    std::uint64_t step = 0;
    for (auto _ : state) benchmark::DoNotOptimize(rng.normal(7, step++));
}
BENCHMARK(BM_PhiloxNormal);

static void BM_Accumulate(benchmark::State& state) {
    auto grid = make_grid(0.0, 4.0, 801);
    DiscreteOccupation occ(grid, 0.0);
    const CounterRng rng(2);
    std::uint64_t i = 0;
    for (auto _ : state) {
        occ.accumulate(rng.normal(0, i++), 1.0 / 400);
        benchmark::DoNotOptimize(occ.total_mass());
    }
}
BENCHMARK(BM_Accumulate);

static void BM_LocalTime(benchmark::State& state) {
    auto grid = make_grid(0.0, 4.0, 801);
    DiscreteOccupation occ(grid, 0.0);
    const CounterRng rng(3);
    for (int i = 0; i < 400; ++i) occ.accumulate(rng.normal(0, i), 1.0 / 400);
    for (auto _ : state) benchmark::DoNotOptimize(occ.local_time(0.3, 0.05));
}
BENCHMARK(BM_LocalTime);

static void BM_EulerOccupied(benchmark::State& state) {
    SimConfig cfg;
    cfg.horizon = 1.0;
    cfg.n_steps = static_cast<std::size_t>(state.range(0));
    cfg.n_paths = 256;
    cfg.seed = 4;
    cfg.x0 = 100.0;
    cfg.grid = make_grid(100.0, 80.0, 201);
    const auto vol = constant_vol(0.2);
    for (auto _ : state) {
        const auto ens = euler_occupied(cfg, vol);
        benchmark::DoNotOptimize(ens.paths.back().terminal_level);
    }
    state.SetItemsProcessed(state.iterations() * cfg.n_paths * cfg.n_steps);
}
BENCHMARK(BM_EulerOccupied)->Arg(64)->Arg(256);

static void BM_ParticleProjection(benchmark::State& state) {
    const std::size_t J = static_cast<std::size_t>(state.range(0)), M = 41;
    const CounterRng rng(5);
    std::vector<double> spots(J);
    std::vector<std::vector<double>> occ(J, std::vector<double>(M));
    for (std::size_t j = 0; j < J; ++j) {
        spots[j] = 100.0 + 10.0 * rng.normal(j, 0);
        for (std::size_t m = 0; m < M; ++m) occ[j][m] = rng.uniform(j, m + 1);
    }
    for (auto _ : state) {
        const auto out = particle_projection(spots, occ, 3.0);
        benchmark::DoNotOptimize(out.back().back());
    }
    state.SetItemsProcessed(state.iterations() * J);
}
BENCHMARK(BM_ParticleProjection)->Arg(1024)->Arg(4096);

static void BM_LsmcValue(benchmark::State& state) {
    for (auto _ : state) {
        const auto res = stopping::lsmc_value(2, 100, 1 << 10, 1 << 12, 1.0, 6);
        benchmark::DoNotOptimize(res.value);
    }
}
BENCHMARK(BM_LsmcValue)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
