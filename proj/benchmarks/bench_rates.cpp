#include <benchmark/benchmark.h>

#include "ratecode/coding.hpp"
#include "ratecode/datagen.hpp"
#include "ratecode/mcr2.hpp"

using namespace ratecode;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
    return m;
}

}  // namespace

static void BM_CodingRate(benchmark::State& state) {
    const Index n = state.range(0);
    const Matrix w = random_matrix(n, 4 * n, 1);
    const Distortion eps(0.3);
    for (auto _ : state) benchmark::DoNotOptimize(coding_rate(w, eps));
    state.SetComplexityN(n);
}
BENCHMARK(BM_CodingRate)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void BM_CodingLengthWithMean(benchmark::State& state) {
    const Index m = state.range(0);
    const Matrix x = random_matrix(8, m, 2);
    const Distortion eps(0.3);
    for (auto _ : state) benchmark::DoNotOptimize(coding_length_with_mean(x, eps));
}
BENCHMARK(BM_CodingLengthWithMean)->RangeMultiplier(4)->Range(16, 1024);

static void BM_KernelCodingLength(benchmark::State& state) {
    const Index m = state.range(0);
    const Matrix w = random_matrix(6, m, 3);
    const GramMatrix gram{w.transpose() * w, 6};
    const Distortion eps(0.4);
    for (auto _ : state) benchmark::DoNotOptimize(kernel_coding_length(gram, eps));
}
BENCHMARK(BM_KernelCodingLength)->RangeMultiplier(2)->Range(16, 256);

static void BM_DeltaRate(benchmark::State& state) {
    const Index m = state.range(0);
    const Matrix z = random_matrix(8, m, 4);
    std::vector<int> labels;
    for (Index i = 0; i < m; ++i) labels.push_back(static_cast<int>(i % 4));
    const Membership pi = Membership::hard(labels);
    const Distortion eps(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(delta_rate(z, pi, eps));
}
BENCHMARK(BM_DeltaRate)->RangeMultiplier(4)->Range(32, 512);

static void BM_DeltaRateGradient(benchmark::State& state) {
    const Index m = state.range(0);
    const Matrix z = random_matrix(8, m, 5);
    std::vector<int> labels;
    for (Index i = 0; i < m; ++i) labels.push_back(static_cast<int>(i % 4));
    const Membership pi = Membership::hard(labels);
    const Distortion eps(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(delta_rate_gradient(z, pi, eps));
}
BENCHMARK(BM_DeltaRateGradient)->RangeMultiplier(4)->Range(32, 512);

BENCHMARK_MAIN();
