#include <benchmark/benchmark.h>

#include "fracns/bilinear.hpp"
#include "fracns/energy.hpp"
#include "fracns/mild.hpp"
#include "fracns/randomization.hpp"
#include "fracns/semigroup.hpp"
#include "fracns/spectral.hpp"

using namespace fracns;

namespace {

SpectralField band(int d, int n, std::uint64_t member) {
  return random_band_field(make_grid(d, n), 1, member, n / 2 - 1, true);
}

void BM_RoundTrip(benchmark::State& state) {
  const SpectralField f = band(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(from_physical(f.grid(), to_physical(f)));
}
BENCHMARK(BM_RoundTrip)->Args({2, 64})->Args({2, 256})->Args({3, 32})->Unit(benchmark::kMicrosecond);

void BM_DealiasedProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SpectralField a = SpectralField::scalar(make_grid(2, n)), b = a;
  const SpectralField v = band(2, n, 0), w = band(2, n, 1);
  for (std::size_t i = 0; i < a.grid().size(); ++i) {
    a.at(0, i) = v.at(0, i);
    b.at(0, i) = w.at(1, i);
  }
  for (auto _ : state) benchmark::DoNotOptimize(dealiased_product(a, b));
}
BENCHMARK(BM_DealiasedProduct)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_BilinearB(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const SpectralField f = band(d, n, 0), g = band(d, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(bilinear_B(f, g));
}
BENCHMARK(BM_BilinearB)->Args({2, 64})->Args({2, 128})->Args({3, 32})->Unit(benchmark::kMicrosecond);

void BM_DuhamelM(benchmark::State& state) {
  const SpectralField u0 = band(2, 32, 0);
  const Trajectory h = heat_trajectory(u0, picard_times(0.1, 0.1 / static_cast<double>(state.range(0))), 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(duhamel_M(h, h, 0.8));
  state.counters["nodes"] = static_cast<double>(h.size());
}
BENCHMARK(BM_DuhamelM)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_GalerkinStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  SpectralField w = band(d, n, 0);
  w *= 0.01;
  const HeatFlow h(0.01 * band(d, n, 1), 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(galerkin_step(w, h, 0.1, 1e-3, 0.8));
}
BENCHMARK(BM_GalerkinStep)->Args({2, 64})->Args({2, 128})->Args({3, 32})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
