#include <gtest/gtest.h>

#include "softtouch/scenarios.hpp"

using namespace softtouch;
using namespace softtouch::scenario;

namespace {

ReplayConfig coulomb_config() {
  ReplayConfig cfg;
  cfg.contact = contact::ContactStateConfig::for_coulomb(0.6);
  return cfg;
}

}  // namespace

TEST(Scenario, Names) {
  for (auto s : {Scenario::SlipTest, Scenario::PlugSuccess, Scenario::PlugOverpush, Scenario::PlugMisalign}) {
    EXPECT_EQ(parse_scenario(to_string(s)), s);
  }
  EXPECT_EQ(to_string(Scenario::PlugOverpush), "plug_overpush");
  EXPECT_THROW(parse_scenario("plug_sideways"), DataError);
}

TEST(Scenario, SetupsDiffer) {
  const auto ok = scenario_setup(Scenario::PlugSuccess);
  const auto over = scenario_setup(Scenario::PlugOverpush);
  const auto mis = scenario_setup(Scenario::PlugMisalign);
  EXPECT_GT(over.schedule.extra_indentation, 0.0);
  EXPECT_GT(mis.schedule.contact_shift, 0.0);
  EXPECT_EQ(ok.schedule.extra_indentation, 0.0);
  EXPECT_LT(ok.schedule.distance, over.schedule.distance);
  EXPECT_EQ(scenario_setup(Scenario::SlipTest).schedule.distance, 30.0);
}

TEST(DetectExcursions, RunsAboveThreshold) {
  std::vector<ForceVector> est(100, ForceVector{0.0, 1.0, 0.0});
  for (std::size_t i = 20; i < 30; ++i) est[i].fy = 2.0;   // long enough
  for (std::size_t i = 50; i < 53; ++i) est[i].fy = 5.0;   // too short
  for (std::size_t i = 70; i < 80; ++i) est[i].fx = -0.8;  // deviation 0.8 in x
  const ForceVector base{0.0, 1.0, 0.0};
  const auto ex = detect_excursions(est, base, 0, 100, 0.5, 5);
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].start, 20u);
  EXPECT_EQ(ex[0].end, 30u);
  EXPECT_DOUBLE_EQ(ex[0].peak, 1.0);
  EXPECT_EQ(ex[1].start, 70u);
  EXPECT_NEAR(ex[1].peak, 0.8, 1e-15);
  // The search window clips runs.
  EXPECT_TRUE(detect_excursions(est, base, 31, 69, 0.5, 5).empty());
  const auto clipped = detect_excursions(est, base, 0, 25, 0.5, 5);
  ASSERT_EQ(clipped.size(), 1u);
  EXPECT_EQ(clipped[0].end, 25u);
}

TEST(Replay, SlipTestOnGroundTruthFindsOnset) {
  auto cfg = coulomb_config();
  cfg.noise = false;
  const auto r = replay_scenario(Scenario::SlipTest, nullptr, cfg);
  EXPECT_FALSE(r.used_model);
  ASSERT_TRUE(r.true_slip_onset.has_value());
  ASSERT_TRUE(r.detected_slip_onset.has_value());
  ASSERT_TRUE(r.slip_timing_error.has_value());
  EXPECT_LE(std::abs(*r.slip_timing_error), 2 * cfg.contact.min_dwell);
  EXPECT_EQ(r.rmse_pooled, 0.0);
  EXPECT_EQ(r.estimate.size(), r.truth.size());
}

TEST(Replay, PlugScenariosOnGroundTruth) {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    auto cfg = coulomb_config();
    cfg.seed = seed;
    cfg.excursion_threshold = calibrate_excursion_threshold(nullptr, cfg);
    EXPECT_GT(*cfg.excursion_threshold, 0.0);
    EXPECT_TRUE(replay_scenario(Scenario::PlugSuccess, nullptr, cfg).excursions.empty()) << "seed " << seed;
    EXPECT_FALSE(replay_scenario(Scenario::PlugOverpush, nullptr, cfg).excursions.empty()) << "seed " << seed;
    EXPECT_FALSE(replay_scenario(Scenario::PlugMisalign, nullptr, cfg).excursions.empty()) << "seed " << seed;
  }
}

TEST(Replay, FixedThresholdIsUsedAsGiven) {
  auto cfg = coulomb_config();
  cfg.excursion_threshold = 1e6;
  const auto r = replay_scenario(Scenario::PlugOverpush, nullptr, cfg);
  EXPECT_EQ(r.excursion_threshold, 1e6);
  EXPECT_TRUE(r.excursions.empty());
}

TEST(Replay, ReportJsonHasKeyFields) {
  auto cfg = coulomb_config();
  cfg.excursion_threshold = 0.5;
  const auto json = replay_scenario(Scenario::PlugMisalign, nullptr, cfg).to_json();
  for (const char* key : {"scenario", "excursions", "events", "excursion_threshold", "peak_deviation"}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
}
