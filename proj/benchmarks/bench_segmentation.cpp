#include <benchmark/benchmark.h>

#include "ratecode/datagen.hpp"
#include "ratecode/micl.hpp"
#include "ratecode/segmentation.hpp"

using namespace ratecode;

namespace {

Matrix blob_data(Index m, std::uint64_t seed) {
    MixtureSpec spec;
    spec.seed = seed;
    MixtureComponent a;
    a.weight = 0.5;
    a.mean = Vector::Zero(2);
    a.covariance = 0.05 * Matrix::Identity(2, 2);
    MixtureComponent b = a;
    b.mean = Vector::Constant(2, 8.0);
    spec.components = {a, b};
    return sample_mixture(spec, m).first;
}

}  // namespace

static void BM_SegmentGreedy(benchmark::State& state) {
    const Matrix w = blob_data(state.range(0), 1);
    const Distortion eps(0.1);
    for (auto _ : state) benchmark::DoNotOptimize(segment_greedy(w, eps));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SegmentGreedy)->RangeMultiplier(2)->Range(16, 256)->Complexity();

static void BM_SegmentBruteforce(benchmark::State& state) {
    const Matrix w = blob_data(state.range(0), 2);
    const Distortion eps(0.1);
    for (auto _ : state) benchmark::DoNotOptimize(segment_bruteforce(w, eps));
}
BENCHMARK(BM_SegmentBruteforce)->DenseRange(6, 10, 2);

static void BM_ClassifyMicl(benchmark::State& state) {
    const Index m = state.range(0);
    const Matrix train = blob_data(m, 3);
    std::vector<int> labels;
    for (Index i = 0; i < m; ++i)
        labels.push_back(train(0, i) > 4.0 ? 1 : 0);
    const auto classifier = ClassifierState::fit(train, labels, Distortion(0.2));
    const Vector x = Vector::Constant(2, 4.0);
    for (auto _ : state) benchmark::DoNotOptimize(classify_micl(x, classifier));
}
BENCHMARK(BM_ClassifyMicl)->RangeMultiplier(4)->Range(32, 512);

static void BM_ClassifyMiclKernelRbf(benchmark::State& state) {
    const auto [train, labels] = sample_two_rings({state.range(0), 1.0, 2.0, 0.05, 4});
    const auto classifier = ClassifierState::fit(train, labels, Distortion(7.0));
    const KernelSpec kernel = KernelSpec::rbf(6.0);
    Vector x(2);
    x << 1.0, 0.5;
    for (auto _ : state)
        benchmark::DoNotOptimize(classify_micl_kernel(x, classifier, kernel));
}
BENCHMARK(BM_ClassifyMiclKernelRbf)->RangeMultiplier(2)->Range(32, 128);

BENCHMARK_MAIN();
