#include <benchmark/benchmark.h>

#include <vector>

#include "smalldev/pathgen.hpp"
#include "smalldev/spectra.hpp"

using namespace smalldev;

static void BM_PeriodicSeries(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto gen = pathgen::PathGenerator::periodic(pathgen::PeriodicGenConfig::with_tolerance(1.0),
                                                    pathgen::GridSpec::unit(n));
  std::vector<double> out(n);
  std::uint64_t i = 0;
  for (auto _ : state) {
    gen.generate(1, i++, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_PeriodicSeries)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_ContinuousPath(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto gen = pathgen::PathGenerator::continuous(spectra::SpectralModel::continuous(2.0), pathgen::GridSpec::unit(n));
  std::vector<double> out(n);
  std::uint64_t i = 0;
  for (auto _ : state) {
    gen.generate(1, i++, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_ContinuousPath)->Arg(256)->Arg(1024);

static void BM_GeneratorSetup(benchmark::State& state) {
  for (auto _ : state) {
    auto gen = pathgen::PathGenerator::continuous(spectra::SpectralModel::continuous(1.0), pathgen::GridSpec::unit(1024));
    benchmark::DoNotOptimize(gen.variance());
  }
}
BENCHMARK(BM_GeneratorSetup)->Unit(benchmark::kMillisecond);

static void BM_Covariance(benchmark::State& state) {
  const auto m = spectra::SpectralModel::continuous(1.5);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectra::covariance(m, t).value);
    t += 0.01;
    if (t > 5.0) t = 0.0;
  }
}
BENCHMARK(BM_Covariance);

BENCHMARK_MAIN();
