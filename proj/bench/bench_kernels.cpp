#include <benchmark/benchmark.h>

#include "pattern_oracle/evaluation.hpp"
#include "pattern_oracle/kernels.hpp"

using namespace pattern_oracle;

static void BM_CountSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(count_by_length_serial());
}
BENCHMARK(BM_CountSerial)->Unit(benchmark::kMillisecond);

static void BM_CountParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(count_by_length_parallel());
}
BENCHMARK(BM_CountParallel)->Unit(benchmark::kMillisecond);

static void BM_EnumerateSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_patterns_serial());
}
BENCHMARK(BM_EnumerateSerial)->Unit(benchmark::kMillisecond);

static void BM_EnumerateParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_patterns_parallel());
}
BENCHMARK(BM_EnumerateParallel)->Unit(benchmark::kMillisecond);

static void BM_ComplexitySerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(complexity_scan_serial());
}
BENCHMARK(BM_ComplexitySerial)->Unit(benchmark::kMillisecond);

static void BM_ComplexityParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(complexity_scan_parallel());
}
BENCHMARK(BM_ComplexityParallel)->Unit(benchmark::kMillisecond);

namespace {

const std::vector<LabeledSample>& bench_corpus() {
  static const std::vector<LabeledSample> corpus = [] {
    CorpusSpec spec;
    spec.samples = 40;
    spec.seed = 3;
    spec.tilt_max_deg = 25.0;
    spec.noise_fraction = 0.02;
    return render_corpus(generate_corpus(spec));
  }();
  return corpus;
}

}  // namespace

static void BM_EvalSerial(benchmark::State& state) {
  bench_corpus();
  for (auto _ : state) benchmark::DoNotOptimize(success_curve_serial(bench_corpus()));
}
BENCHMARK(BM_EvalSerial)->Unit(benchmark::kMillisecond);

static void BM_EvalParallel(benchmark::State& state) {
  const int jobs = int(state.range(0));
  bench_corpus();
  for (auto _ : state)
    benchmark::DoNotOptimize(success_curve(bench_corpus(), {}, kDefaultAttempts, jobs));
}
BENCHMARK(BM_EvalParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
