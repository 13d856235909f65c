#include <vector>

#include <benchmark/benchmark.h>

#include "softtouch/contact.hpp"
#include "softtouch/finger_sim.hpp"

namespace {

using namespace softtouch;

void BM_SimulateEpisode(benchmark::State& state) {
  ConditionMeta meta;
  meta.finger_pressure = 40.0;
  const auto finger = sim::FingerModel::from_condition(meta);
  auto art = state.range(0) ? sim::SensorArtifactModel::defaults() : sim::SensorArtifactModel::identity();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::simulate_episode(meta, finger, art));
  }
}
BENCHMARK(BM_SimulateEpisode)->Arg(0)->Arg(1);

void BM_CorruptChannels(benchmark::State& state) {
  std::vector<sim::CleanSample> clean(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < clean.size(); ++i) {
    clean[i].t = static_cast<double>(i) * kSamplePeriod;
    clean[i].strain = 0.001 * static_cast<double>(i % 100);
    for (std::size_t k = 0; k < kTaxelCount; ++k) clean[i].taxel_forces[k] = 0.01 * static_cast<double>((i + k) % 50);
  }
  const auto art = sim::SensorArtifactModel::defaults();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::corrupt_channels(clean, art));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CorruptChannels)->Arg(1800)->Arg(18000);

void BM_ClassifyStream(benchmark::State& state) {
  ConditionMeta meta;
  const auto ep = sim::simulate_episode(meta, sim::FingerModel::from_condition(meta),
                                        sim::SensorArtifactModel::identity());
  const auto cfg = contact::ContactStateConfig::for_coulomb(meta.friction_mu);
  for (auto _ : state) {
    benchmark::DoNotOptimize(contact::classify_stream(ep.labels, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(ep.size()));
}
BENCHMARK(BM_ClassifyStream);

}  // namespace
