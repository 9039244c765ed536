#include "mixobs/chernoff.hpp"
#include "mixobs/design.hpp"
#include "mixobs/model.hpp"

#include <benchmark/benchmark.h>

using namespace mixobs;

static void BM_ChernoffGaussian(benchmark::State& state) {
    const Gaussian1D g1 = normal(0.3, 1.0);
    const Gaussian1D g2 = normal(0.0, 4.0);
    for (auto _ : state) benchmark::DoNotOptimize(chernoff_gaussian(g1, g2).value);
}
BENCHMARK(BM_ChernoffGaussian);

static void BM_OuterChernoffSeparate7(benchmark::State& state) {
    const AnomalyModel model(7, 1, normal(0, 1), normal(0, 100));
    std::vector<MeasurementVector> atoms;
    for (int i = 0; i < 7; ++i) atoms.push_back(unit_vector(7, i));
    const Ensemble separate = Ensemble::uniform(std::move(atoms));
    const auto hs = enumerate_hypotheses(7, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(outer_chernoff(separate, model, hs[0], hs[1]).value);
}
BENCHMARK(BM_OuterChernoffSeparate7);

static void BM_MinPairwiseExponentHamming(benchmark::State& state) {
    const AnomalyModel model(7, 1, normal(0, 1), normal(0, 100));
    const Schedule hamming = hamming74_design();
    for (auto _ : state)
        benchmark::DoNotOptimize(min_pairwise_exponent(hamming, model).min_exponent);
}
BENCHMARK(BM_MinPairwiseExponentHamming);

BENCHMARK_MAIN();
