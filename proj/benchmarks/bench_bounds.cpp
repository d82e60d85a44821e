#include <benchmark/benchmark.h>

#include "smalldev/entropy.hpp"
#include "smalldev/gfunction.hpp"
#include "smalldev/tsirelson.hpp"

using namespace smalldev;

static void BM_TsirelsonOpt(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(tsirelson::bound_opt(1.0, tsirelson::Spectrum::Discrete, 1e-100).phi_lower);
  }
}
BENCHMARK(BM_TsirelsonOpt);

static void BM_EntropyUpper(benchmark::State& state) {
  const auto e = entropy::CoefficientEllipsoid::periodic(1.0, 40);
  const double eps = state.range(0) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(entropy::entropy_upper(e, eps));
}
BENCHMARK(BM_EntropyUpper)->Arg(50)->Arg(20)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_GEval(benchmark::State& state) {
  const auto spec = entropy::GFunctionSpec::make(0.5);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(entropy::g_eval(spec, t).value);
}
BENCHMARK(BM_GEval)->Arg(10)->Arg(1000)->Arg(10000);

static void BM_TruncationBound(benchmark::State& state) {
  entropy::TruncationBoundInput in;
  in.model = spectra::SpectralModel::continuous(0.5);
  in.epsilon = 1e-12;
  for (auto _ : state) benchmark::DoNotOptimize(entropy::truncation_entropy_upper(in).H_upper);
}
BENCHMARK(BM_TruncationBound);

BENCHMARK_MAIN();
