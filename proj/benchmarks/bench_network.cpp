#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "softtouch/network.hpp"

namespace {

using namespace softtouch;

nn::Arch arch_of(int i) { return static_cast<nn::Arch>(i); }

// args: arch, layers, window
void BM_Forward(benchmark::State& state) {
  const nn::ModelSpec spec{arch_of(static_cast<int>(state.range(0))), static_cast<int>(state.range(1)), 10, 14, 3};
  const auto steps = static_cast<std::size_t>(state.range(2));
  const auto w = nn::ModelWeights::xavier(spec, 1);
  std::vector<double> x(steps * 14);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (auto& v : x) v = g(rng);
  nn::Network net(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(w.params, {x.data(), steps, 14}));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Forward)
    ->Args({0, 1, 1})
    ->Args({1, 1, 20})
    ->Args({2, 1, 20})
    ->Args({3, 1, 20})
    ->Args({3, 5, 20})
    ->Args({3, 10, 20});

// One mini-batch of 32 windows, forward plus backward.
void BM_LossAndGradient(benchmark::State& state) {
  const nn::ModelSpec spec{arch_of(static_cast<int>(state.range(0))), static_cast<int>(state.range(1)), 10, 14, 3};
  const std::size_t steps = spec.arch == nn::Arch::MLP ? 1 : 20;
  const auto w = nn::ModelWeights::xavier(spec, 1);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> xs(32, std::vector<double>(steps * 14));
  std::vector<nn::Sample> batch;
  for (auto& x : xs) {
    for (auto& v : x) v = g(rng);
    batch.push_back({{x.data(), steps, 14}, {g(rng), g(rng), g(rng)}});
  }
  nn::Network net(spec);
  std::vector<double> grad(w.params.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(nn::loss_and_gradient(w.params, net, batch, grad));
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_LossAndGradient)->Args({0, 1})->Args({1, 1})->Args({2, 1})->Args({3, 1})->Args({3, 5});

}  // namespace
