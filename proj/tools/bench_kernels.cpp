// Compares the OpenMP kernels against their serial reference
// implementations on a mid-size problem.  Run with --benchmark_filter=...
// to pick one kernel.

#include "vorgp/adaptive.hpp"
#include "vorgp/predict.hpp"
#include "vorgp/rjmcmc.hpp"
#include "vorgp/testbed.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace vorgp;

struct Fixture {
    TrainingSet data;
    Chain chain;
    Matrix grid;
    FittedModel map;

    Fixture() : data(make_data()), chain(make_chain(data)), grid(grid_2d(60, 60)),
                map(map_model(chain, data)) {}

    static TrainingSet make_data() {
        const TestFunction fn = eta1();
        RngStream rng(11);
        const Matrix design = maximin_lhs(60, 2, rng, 2);
        Vector y(design.rows());
        for (int i = 0; i < design.rows(); ++i) {
            y[i] = fn.eval(design.row(i).transpose());
        }
        return {design, y};
    }

    static Chain make_chain(const TrainingSet& data) {
        McmcConfig cfg;
        cfg.n_iterations = 1500;
        cfg.thinning = 5;
        cfg.seed = 7;
        cfg.fit.n_restarts = 3;
        cfg.fit.max_evals = 120;
        return run_chain(data, cfg);
    }
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

void bm_surface_serial(benchmark::State& state) {
    auto& f = fixture();
    for (auto _ : state) {
        auto grid = integrated_surface_serial(f.chain, f.data, f.grid);
        benchmark::DoNotOptimize(grid.integrated_mean.data());
    }
}

void bm_surface_openmp(benchmark::State& state) {
    auto& f = fixture();
    for (auto _ : state) {
        auto grid = integrated_surface(f.chain, f.data, f.grid);
        benchmark::DoNotOptimize(grid.integrated_mean.data());
    }
}

void bm_candidates_serial(benchmark::State& state) {
    auto& f = fixture();
    for (auto _ : state) {
        auto c = boundary_candidates_serial(f.map, 1 % f.map.tess.r(), 512, 3);
        benchmark::DoNotOptimize(c.points.data());
    }
}

void bm_candidates_openmp(benchmark::State& state) {
    auto& f = fixture();
    for (auto _ : state) {
        auto c = boundary_candidates(f.map, 1 % f.map.tess.r(), 512, 3);
        benchmark::DoNotOptimize(c.points.data());
    }
}

BENCHMARK(bm_surface_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_surface_openmp)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_candidates_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_candidates_openmp)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
