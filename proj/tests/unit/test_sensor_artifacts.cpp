#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "softtouch/finger_sim.hpp"

using namespace softtouch;
using namespace softtouch::sim;

namespace {

std::vector<CleanSample> ramp_samples(std::size_t n, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<CleanSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].t = static_cast<double>(i) * kSamplePeriod;
    out[i].strain = u(rng);
    for (auto& f : out[i].taxel_forces) f = u(rng);
  }
  return out;
}

}  // namespace

TEST(Saturate, Examples) {
  EXPECT_EQ(saturate(0.0, 1.0, 0.15), 0.0);
  EXPECT_DOUBLE_EQ(saturate(2.0, 1.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(saturate(-2.0, 1.0, 0.5), -1.0);
  EXPECT_DOUBLE_EQ(saturate(3.0, 2.0, 0.0), 6.0);
}

TEST(Saturate, MonotoneAndBounded) {
  double prev = saturate(-50.0, 1.0, 0.15);
  for (double f = -49.9; f < 50.0; f += 0.1) {
    const double c = saturate(f, 1.0, 0.15);
    EXPECT_GT(c, prev);
    EXPECT_LT(std::abs(c), 1.0 / 0.15);
    prev = c;
  }
}

TEST(PlayOperator, DeadZone) {
  PlayOperator p(0.5);
  EXPECT_EQ(p.step(1.0), 1.0);
  EXPECT_EQ(p.step(1.4), 1.0);   // inside the band
  EXPECT_EQ(p.step(2.0), 1.5);   // pushes the lower edge
  EXPECT_EQ(p.step(1.8), 1.5);
  EXPECT_EQ(p.step(0.5), 1.0);   // pushes the upper edge
  p.reset();
  EXPECT_EQ(p.step(7.0), 7.0);
}

TEST(PlayOperator, OutputStaysWithinHalfWidth) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  PlayOperator p(0.3);
  for (int i = 0; i < 2000; ++i) {
    const double x = g(rng);
    EXPECT_LE(std::abs(p.step(x) - x), 0.3 + 1e-15);
  }
}

TEST(CorruptChannels, IdentityIsExactPassThrough) {
  const auto clean = ramp_samples(200);
  const auto out = corrupt_channels(clean, SensorArtifactModel::identity());
  ASSERT_EQ(out.size(), clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    EXPECT_EQ(out[i].strain, clean[i].strain);
    EXPECT_EQ(out[i].taxels, clean[i].taxel_forces);
  }
}

TEST(CorruptChannels, DeterministicInSeed) {
  const auto clean = ramp_samples(300);
  auto art = SensorArtifactModel::defaults();
  art.seed = 99;
  const auto a = corrupt_channels(clean, art);
  const auto b = corrupt_channels(clean, art);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].strain, b[i].strain);
    EXPECT_EQ(a[i].taxels, b[i].taxels);
  }
}

TEST(CorruptChannels, CrosstalkLeaksOnlyToNeighbours) {
  // Pressing taxels 3, 4, 8 and 9 only; 2, 5, 7 and 10 are the unpressed direct neighbours.
  auto art = SensorArtifactModel::identity();
  art.crosstalk = SensorArtifactModel::adjacent_crosstalk(0.15);
  art.noise_sigma = 0.01;
  art.seed = 5;
  std::vector<CleanSample> idle(100), pressed(100);
  for (std::size_t i = 0; i < 100; ++i) {
    idle[i].t = pressed[i].t = static_cast<double>(i) * kSamplePeriod;
    for (std::size_t j : {3u, 4u, 8u, 9u}) pressed[i].taxel_forces[j] = 1.0;
  }
  const auto a = corrupt_channels(idle, art);
  const auto b = corrupt_channels(pressed, art);
  for (std::size_t i = 0; i < 100; ++i) {
    for (std::size_t j : {2u, 5u, 7u, 10u}) {
      EXPECT_GT(b[i].taxels[j] - a[i].taxels[j], 3.0 * art.noise_sigma) << "taxel " << j;
    }
    for (std::size_t j : {0u, 11u}) {
      EXPECT_NEAR(b[i].taxels[j], a[i].taxels[j], 1e-12) << "taxel " << j;
    }
  }
}

TEST(CorruptChannels, CertainOutlierSitsTenSigmaAboveBaseline) {
  auto art = SensorArtifactModel::identity();
  art.noise_sigma = 0.02;
  art.outlier_prob = 1.0;
  const auto clean = ramp_samples(20);
  const auto out = corrupt_channels(clean, art);
  for (const auto& r : out) {
    EXPECT_NEAR(r.strain, clean[0].strain + 0.2, 1e-12);
    for (std::size_t j = 0; j < kTaxelCount; ++j) {
      EXPECT_NEAR(r.taxels[j], clean[0].taxel_forces[j] + 0.2, 1e-12);
    }
  }
}

TEST(CorruptChannels, NoiseHasConfiguredSpread) {
  auto art = SensorArtifactModel::identity();
  art.noise_sigma = 0.05;
  art.seed = 7;
  std::vector<CleanSample> clean(4000);
  for (std::size_t i = 0; i < clean.size(); ++i) clean[i].t = static_cast<double>(i) * kSamplePeriod;
  const auto out = corrupt_channels(clean, art);
  double sum = 0.0, sq = 0.0;
  for (const auto& r : out) {
    sum += r.strain;
    sq += r.strain * r.strain;
  }
  const double n = static_cast<double>(out.size());
  EXPECT_NEAR(sum / n, 0.0, 0.005);
  EXPECT_NEAR(std::sqrt(sq / n), 0.05, 0.003);
}

TEST(CorruptChannels, DriftGrowsTowardsItsAmplitude) {
  auto art = SensorArtifactModel::identity();
  art.drift_rate = 1.0;
  art.drift_amp = 0.2;
  art.seed = 3;
  std::vector<CleanSample> clean(2000);
  for (std::size_t i = 0; i < clean.size(); ++i) clean[i].t = static_cast<double>(i) * kSamplePeriod;
  const auto out = corrupt_channels(clean, art);
  EXPECT_EQ(out.front().strain, 0.0);
  EXPECT_LE(std::abs(out.back().strain), 0.2);
  // After 20 time constants the channel sits at its asymptote.
  EXPECT_NEAR(out.back().strain, out[1500].strain, 1e-6);
}

TEST(SensorArtifactModel, ValidateRejectsBadParameters) {
  auto art = SensorArtifactModel::defaults();
  EXPECT_NO_THROW(art.validate());
  art.outlier_prob = 1.5;
  EXPECT_THROW(art.validate(), std::invalid_argument);
  art = SensorArtifactModel::defaults();
  art.crosstalk = SensorArtifactModel::adjacent_crosstalk(0.2);  // diagonal 0.6 < 0.65
  EXPECT_THROW(art.validate(), std::invalid_argument);
  art = SensorArtifactModel::defaults();
  art.saturation_a = 0.0;
  EXPECT_THROW(art.validate(), std::invalid_argument);
}

TEST(SensorArtifactModel, AdjacentCrosstalkRowsSumToOne) {
  const auto c = SensorArtifactModel::adjacent_crosstalk(0.15);
  for (std::size_t i = 0; i < kTaxelCount; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < kTaxelCount; ++j) s += c(i, j);
    EXPECT_NEAR(s, 1.0, 1e-15);
  }
  EXPECT_DOUBLE_EQ(c(0, 0), 0.85);
  EXPECT_DOUBLE_EQ(c(5, 5), 0.7);
}
