#include <benchmark/benchmark.h>

#include <vector>

#include "smalldev/smallball.hpp"

using namespace smalldev;

static void BM_ExactL2(benchmark::State& state) {
  const auto spec = smallball::WeightedChiSquareSpec::periodic(1.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(smallball::exact_l2(spec, 0.5));
}
BENCHMARK(BM_ExactL2)->Arg(8)->Arg(40);

static void BM_LogExactL2Deep(benchmark::State& state) {
  const auto spec = smallball::WeightedChiSquareSpec::periodic(1.0, 40);
  for (auto _ : state) benchmark::DoNotOptimize(smallball::log_exact_l2(spec, 1e-8));
}
BENCHMARK(BM_LogExactL2Deep);

static void BM_Estimate(benchmark::State& state) {
  smallball::GeneratorConfig cfg;
  cfg.model = spectra::SpectralModel::discrete(1.0);
  cfg.grid = pathgen::GridSpec::unit(1024);
  const auto gen = smallball::make_generator(cfg);
  const std::vector<double> radii{0.5, 1.0, 2.0};
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(smallball::estimate(gen, smallball::Norm::Sup, radii, n, 1, 1));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_Estimate)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
