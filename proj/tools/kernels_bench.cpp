// Serial reference vs. row-run/OpenMP kernels on a 100x100 map with 6 obstacles.
#include <benchmark/benchmark.h>

#include <numeric>

#include "lcx/kernels.hpp"
#include "lcx/rng.hpp"

using namespace lcx;

namespace {

struct Fixture {
    std::vector<Obstacle> obstacles{{10, 10, 20, 30}, {45, 5, 10, 40}, {70, 20, 25, 15},
                                    {15, 60, 30, 10}, {55, 55, 12, 35}, {80, 60, 10, 30}};
    SampleGrid grid = SampleGrid::make(100, 100, obstacles, 1.0);
    std::vector<std::uint8_t> weight;
    std::vector<std::uint32_t> candidates;
    std::vector<Vec2> sources;

    Fixture() {
        weight = grid.free;
        Rng rng(1);
        for (std::uint32_t i = 0; i < grid.size(); ++i) {
            if (grid.free[i] && rng.bernoulli(0.05)) candidates.push_back(i);
        }
        for (int k = 0; k < 40; ++k) sources.push_back(grid.point(candidates[rng.index(candidates.size())]));
    }
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

void BM_VisibleCountsReference(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            kernels::visible_counts_reference(f.grid, f.obstacles, f.weight, f.candidates, 23.0, true));
    }
}

void BM_VisibleCounts(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::visible_counts(f.grid, f.obstacles, f.weight, f.candidates, 23.0, true));
    }
}

void BM_CoverageMaskReference(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::coverage_mask_reference(f.grid, f.obstacles, f.sources, 15.0, true));
    }
}

void BM_CoverageMask(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::coverage_mask(f.grid, f.obstacles, f.sources, 15.0, true));
    }
}

}  // namespace

BENCHMARK(BM_VisibleCountsReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VisibleCounts)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverageMaskReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverageMask)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
