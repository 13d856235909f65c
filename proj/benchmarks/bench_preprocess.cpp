#include <random>

#include <benchmark/benchmark.h>

#include "softtouch/preprocess.hpp"

namespace {

using namespace softtouch;

Matrix random_channels(std::size_t rows) {
  Matrix m(rows, 14);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (auto& v : m.data) v = g(rng);
  return m;
}

void BM_FitScaler(benchmark::State& state) {
  const auto m = random_channels(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(prep::fit_scaler(m));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitScaler)->Arg(1800)->Arg(180000);

void BM_Transform(benchmark::State& state) {
  const auto m = random_channels(static_cast<std::size_t>(state.range(0)));
  const auto p = prep::fit_scaler(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prep::transform(m, p));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Transform)->Arg(180000);

}  // namespace
