#include "mrgg/mrgg.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

mrgg::Graph test1_graph(std::size_t n) {
  const auto chain = mrgg::sample_chain(n, 3, mrgg::LatitudeDistribution::beta_mixture(2, 2), 1);
  return mrgg::sample_graph(chain, mrgg::Envelope::heaviside(), 1.0, 2);
}

void BM_SymEigen(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto t = mrgg::build_that(test1_graph(n));
  const bool vectors = state.range(1) != 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(mrgg::sym_eigen(t, vectors, mrgg::SpectrumOrder::by_value_desc));
}
BENCHMARK(BM_SymEigen)->Args({300, 0})->Args({300, 1})->Args({1500, 0})->Args({1500, 1})
    ->Unit(benchmark::kMillisecond);

void BM_HacComplete(benchmark::State& state) {
  mrgg::Rng rng(3);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(mrgg::hac_complete(v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HacComplete)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_SelectResolution(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto spectrum =
      mrgg::sym_eigen(mrgg::build_that(test1_graph(n)), false, mrgg::SpectrumOrder::by_magnitude_desc);
  const auto grid = mrgg::default_kappa_grid();
  for (auto _ : state) benchmark::DoNotOptimize(mrgg::select_resolution(spectrum.values, 3, n, grid));
}
BENCHMARK(BM_SelectResolution)->Arg(300)->Arg(1500)->Unit(benchmark::kMillisecond);

void BM_Delta2(benchmark::State& state) {
  mrgg::Rng rng(4);
  std::vector<double> x(static_cast<std::size_t>(state.range(0))), y(x.size() / 2);
  for (auto& e : x) e = rng.normal();
  for (auto& e : y) e = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(mrgg::delta2(x, y));
}
BENCHMARK(BM_Delta2)->Arg(16)->Arg(1500);

void BM_Posterior(benchmark::State& state) {
  const auto lat = mrgg::LatitudeDistribution::scaled_beta(5, 1);
  const mrgg::PosteriorIntegrator eta(mrgg::Envelope::heaviside(), [&](double r) { return lat.pdf(r); });
  double r = -0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eta(r));
    r = r > 0.9 ? -0.9 : r + 0.01;
  }
}
BENCHMARK(BM_Posterior);

}  // namespace
BENCHMARK_MAIN();
