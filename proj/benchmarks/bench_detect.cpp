#include "mixobs/design.hpp"
#include "mixobs/detect.hpp"
#include "mixobs/montecarlo.hpp"

#include <benchmark/benchmark.h>

using namespace mixobs;

static void BM_LrtBipartite(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int m = static_cast<int>(state.range(1));
    const AnomalyModel model(n, 1, normal(8, 1), normal(0, 1));
    const Schedule schedule = bipartite_design({n, m, 6, 42}).schedule;
    const auto hypotheses = enumerate_hypotheses(n, 1);
    Rng rng(7);
    const auto table = realization_table(model, hypotheses[0], m, rng);
    const Observations obs = apply_schedule(schedule, table);
    for (auto _ : state)
        benchmark::DoNotOptimize(lrt(model, schedule, obs, hypotheses).selected);
}
BENCHMARK(BM_LrtBipartite)->Args({102, 68})->Args({100, 300});

static void BM_SimulateTrial(benchmark::State& state) {
    const AnomalyModel model(102, 1, normal(8, 1), normal(0, 1));
    const Schedule schedule = bipartite_design({102, 68, 6, 42}).schedule;
    const auto hypotheses = enumerate_hypotheses(102, 1);
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            simulate_trial(model, hypotheses[3], schedule, DetectorKind::Lrt, NPConfig{}, ++seed));
}
BENCHMARK(BM_SimulateTrial);
