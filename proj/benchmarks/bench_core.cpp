#include <benchmark/benchmark.h>

#include "pnc/distance.hpp"
#include "pnc/hypercube.hpp"
#include "pnc/simulator.hpp"

using namespace pnc;

static void BM_CountFormula(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(count_formula(5, 4));
}
BENCHMARK(BM_CountFormula);

static void BM_EnumerateSubspaces(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int M = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_subspaces(n, M));
}
BENCHMARK(BM_EnumerateSubspaces)->Args({3, 4})->Args({4, 4})->Args({5, 4});

static void BM_RemovalConstraints(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int M = static_cast<int>(state.range(1));
    SubspaceKey key;
    for (const auto& k : enumerate_subspaces(n, M)) {
        if (is_removable(k)) {
            key = k;
            break;
        }
    }
    for (auto _ : state) benchmark::DoNotOptimize(removal_constraints(key));
}
BENCHMARK(BM_RemovalConstraints)->Args({3, 4})->Args({5, 4});

static void BM_FillGreedy(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int M = static_cast<int>(state.range(1));
    SubspaceKey key;
    for (const auto& k : enumerate_subspaces(n, M)) {
        if (is_removable(k)) {
            key = k;
            break;
        }
    }
    const ConstraintPartition part = removal_constraints(key);
    for (auto _ : state) benchmark::DoNotOptimize(fill_greedy(part));
}
BENCHMARK(BM_FillGreedy)->Args({3, 4})->Args({5, 4});

static void BM_SelectMap(benchmark::State& state) {
    const auto candidates = build_removable_candidates(3, 4);
    Rng rng(1);
    FadeState H(3);
    for (auto& h : H) h = sample_rician(20.0, rng);
    for (auto _ : state) benchmark::DoNotOptimize(select_map_index(H, candidates));
}
BENCHMARK(BM_SelectMap);

static void BM_MlJointDecode(benchmark::State& state) {
    Rng rng(2);
    FadeState H(3);
    for (auto& h : H) h = sample_rician(20.0, rng);
    const Complex y(0.3, -0.8);
    for (auto _ : state) benchmark::DoNotOptimize(ml_joint_decode(y, H, 3, 4));
}
BENCHMARK(BM_MlJointDecode);

static void BM_SimulateFrameBatch(benchmark::State& state) {
    SimConfig cfg;
    cfg.n = 3;
    cfg.M = 4;
    cfg.scheme = Scheme::Adaptive;
    cfg.snr_db_list = {25.0};
    cfg.frames_per_point = 50;
    cfg.seed = 7;
    for (auto _ : state) benchmark::DoNotOptimize(run_simulation(cfg, 1));
}
BENCHMARK(BM_SimulateFrameBatch)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
