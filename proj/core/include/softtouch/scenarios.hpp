#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "softtouch/contact.hpp"
#include "softtouch/finger_sim.hpp"
#include "softtouch/pipeline.hpp"

namespace softtouch::scenario {

enum class Scenario { SlipTest, PlugSuccess, PlugOverpush, PlugMisalign };
std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view s);

/// Convex r=30 mm object at 40 kPa, centered, with the motion adapted per scenario:
/// SlipTest drags 30 mm; PlugSuccess pushes 0.3 mm; PlugOverpush pushes 8 mm while the contact
/// is driven 1.5 mm deeper; PlugMisalign pushes 1.5 mm while the contact point walks 12 mm along
/// the finger and deepens by 0.8 mm. Each holds 3 s before release.
struct ScenarioSetup {
  ConditionMeta meta;
  sim::MotionSchedule schedule;
};
ScenarioSetup scenario_setup(Scenario s);

struct ReplayConfig {
  std::uint64_t seed = 0;
  bool noise = true;
  contact::ContactStateConfig contact;
  /// Force-excursion threshold in N; when absent it is calibrated as 3x the peak deviation of a
  /// PlugSuccess run using calibration_seed.
  std::optional<double> excursion_threshold;
  std::uint64_t calibration_seed = 1000;
  double baseline_window = 0.5;  // s before T_m used as the force baseline
};

struct Excursion {
  std::size_t start = 0;  // frame
  std::size_t end = 0;    // one past the last frame
  double peak = 0.0;      // N, largest deviation inside the run
};

struct ReplayReport {
  Scenario scenario = Scenario::SlipTest;
  bool used_model = false;
  std::vector<double> t;
  std::vector<ForceVector> truth;
  std::vector<ForceVector> estimate;  // equals truth when no model is given
  std::vector<PhaseMark> phases;
  contact::StreamResult contact;
  std::vector<Excursion> excursions;
  double excursion_threshold = 0.0;
  double peak_deviation = 0.0;
  double rmse_pooled = 0.0;
  std::optional<std::size_t> true_slip_onset;      // first simulator slipping frame
  std::optional<std::size_t> detected_slip_onset;  // first SlipOnset event
  std::optional<long> slip_timing_error;           // detected - true, frames

  std::string to_json() const;
};

/// Simulates the scenario, estimates forces with `model` (ground truth when null), classifies the
/// contact state on the estimates and detects force excursions during the Moving phase.
ReplayReport replay_scenario(Scenario s, const TrainedModel* model, const ReplayConfig& cfg);

/// 3x the peak deviation seen in a PlugSuccess replay with the given seed.
double calibrate_excursion_threshold(const TrainedModel* model, const ReplayConfig& cfg);

/// Runs of at least min_dwell frames, inside [from, to), where |estimate - baseline| >= threshold.
std::vector<Excursion> detect_excursions(std::span<const ForceVector> estimate, const ForceVector& baseline,
                                         std::size_t from, std::size_t to, double threshold, int min_dwell);

}  // namespace softtouch::scenario
