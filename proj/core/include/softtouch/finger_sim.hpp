#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "softtouch/types.hpp"

namespace softtouch::sim {

/// Simulator constants behind the condition -> finger model maps and the
/// clean sensor projection. Values are assumptions of this simulator.
struct FingerParams {
  double k0_normal = 0.8;            // N/mm, unpressurized finger on the reference object
  double pressure_stiffening = 0.01;  // per kPa
  double k0_tangent = 0.4;           // N/mm
  double tangent_offset_gain = 0.02;  // per mm of |robot_offset_y|
  double base_indentation = 1.0;     // mm
  double indentation_per_kpa = 0.03;  // mm/kPa
  double indentation_per_offset_z = 0.08;
  double min_indentation = 0.3;
  double strain_offset = 0.2;
  double strain_gain = 0.08;        // per mm of deflection
  double tangent_strain_weight = 1.0;
  double two_finger_normal_share = 0.5;  // each finger's effective normal stiffness in a 2-finger grasp
};

double normal_size_factor(ObjectShape shape, double size);
double tangent_size_factor(ObjectShape shape, double size);
/// Half-width (mm) of the cosine-squared contact patch.
double patch_half_width(ObjectShape shape, double size);

/// Linearized finger stiffness and Coulomb coefficient for one condition.
struct FingerModel {
  double k_normal = 1.0;          // N/mm
  double k_tangent = 0.5;         // N/mm
  double rest_indentation = 1.0;  // mm
  double mu = 0.6;

  /// k_normal = k0 (1 + 0.01 P) size_factor; k_tangent depends on offset and size only.
  static FingerModel from_condition(const ConditionMeta& meta, const FingerParams& params = {});
  void validate() const;
};

/// Sensor corruption parameters. Channel order for per-channel state: strain, taxel_00..taxel_11.
struct SensorArtifactModel {
  double play_width = 0.02;  // backlash half-width
  double saturation_a = 1.0;
  double saturation_b = 0.15;
  Matrix crosstalk;  // 12x12, row-normalized
  double drift_rate = 0.05;  // 1/s
  double drift_amp = 0.05;   // per-channel amplitude is drawn uniformly in [-drift_amp, drift_amp]
  double noise_sigma = 0.02;
  double outlier_prob = 0.002;
  double ft_noise_sigma = 0.02;  // N, added to force labels (reference sensor noise)
  std::uint64_t seed = 0;

  static SensorArtifactModel defaults();
  /// Pass-through configuration: no saturation, hysteresis, crosstalk, drift or noise.
  static SensorArtifactModel identity();
  /// Diagonal 1 - 2w, w on each adjacent taxel; edge rows keep the missing neighbor mass on the diagonal.
  static Matrix adjacent_crosstalk(double neighbor_weight);
  void validate() const;
};

/// c = a f / (1 + b |f|); monotone increasing for b >= 0.
double saturate(double f, double a, double b);

/// Play (backlash) operator with half-width w.
class PlayOperator {
 public:
  explicit PlayOperator(double half_width) : w_(half_width) {}
  double step(double x);
  void reset() { primed_ = false; }

 private:
  double w_;
  double y_ = 0.0;
  bool primed_ = false;
};

/// Mechanical state of the finger at one instant.
struct FingerState {
  double normal_force = 0.0;            // N
  double indentation = 0.0;             // mm
  double tangential_deflection = 0.0;   // mm, delta_t
  double contact_shift = 0.0;           // mm along the finger, on top of robot_offset_y
};

struct CleanProjection {
  double strain = 0.0;
  std::array<double, kTaxelCount> taxel_forces{};
  Vec3 normal_direction{0.0, 1.0, 0.0};  // unit direction of F^n
  bool center_clamped = false;
};

/// Spreads F^n over a cosine-squared patch so that pressure_normal_force(taxel_forces)
/// reproduces F^n exactly; strain is affine in indentation + |delta_t|.
CleanProjection clean_sensor_projection(const FingerState& state, const ConditionMeta& meta,
                                        const TaxelLayout& layout, const FingerParams& params = {});

struct CleanSample {
  double t = 0.0;
  double strain = 0.0;
  std::array<double, kTaxelCount> taxel_forces{};
};

struct SensorReading {
  double strain = 0.0;
  std::array<double, kTaxelCount> taxels{};
};

/// Applies, per channel and in time order: saturation, play hysteresis, crosstalk (taxels),
/// exponential drift, Gaussian noise, spike outliers. Deterministic given artifacts.seed.
std::vector<SensorReading> corrupt_channels(std::span<const CleanSample> clean,
                                            const SensorArtifactModel& artifacts);

/// Timing of one grasp-and-drag trial. Defaults follow the friction protocol: 2 s settle
/// after contact, then a 30 mm drag at 2 mm/s along +x.
struct MotionSchedule {
  double precontact = 0.5;    // s, pressurizing before contact
  double contact_ramp = 0.3;  // s, indentation rise time
  double settle = 2.0;        // s, T_m - T_c
  double speed = 2.0;         // mm/s
  double distance = 30.0;     // mm
  double hold = 0.0;          // s, stationary after the move
  double release = 0.5;       // s
  double release_ramp = 0.3;  // s
  double extra_indentation = 0.0;  // mm, added linearly over the move
  double contact_shift = 0.0;      // mm, contact center travel over the move

  double move_duration() const { return speed > 0.0 ? distance / speed : 0.0; }
  void validate() const;
};

/// Runs one trial. Ground truth obeys F_n = k_normal * indentation and
/// F_f = min(k_tangent * delta_t, mu * F_n); frames at the Coulomb limit are flagged slipping.
Episode simulate_episode(const ConditionMeta& meta, const FingerModel& finger,
                         const SensorArtifactModel& artifacts, const MotionSchedule& schedule = {},
                         const FingerParams& params = {},
                         const TaxelLayout& layout = TaxelLayout::standard());

struct GraspEpisode {
  std::vector<Episode> fingers;
  std::vector<GraspForces> forces;  // per frame
};

/// Two mirrored fingers sharing the object motion; each finger's normal stiffness is scaled by
/// params.two_finger_normal_share. Finger 1 is mirrored in y.
GraspEpisode simulate_grasp(const ConditionMeta& meta, const SensorArtifactModel& artifacts,
                            const MotionSchedule& schedule = {}, const FingerParams& params = {});

struct ObjectSpec {
  ObjectShape shape = ObjectShape::Convex;
  double size = 30.0;
  bool holdout = false;
};

struct SweepConfig {
  std::vector<ObjectSpec> objects;
  std::vector<double> pressures;
  std::vector<double> offsets_y;
  std::vector<double> offsets_z;
  int repetitions = 4;
  int n_fingers = 1;
  double friction_mu = 0.6;
  bool noise = true;
  MotionSchedule schedule;
  SensorArtifactModel artifacts = SensorArtifactModel::defaults();
  FingerParams finger;

  /// Convex r=30/22.5/15 (15 held out), concave r=30, square 20; 0-60 kPa; 3x3 y/z offsets; 4 reps.
  static SweepConfig defaults();
  std::size_t condition_count() const;
  std::size_t episode_count() const;
  void validate() const;
};

SweepConfig sweep_from_yaml(const std::string& text);
SweepConfig load_sweep_config(const std::filesystem::path& file);
std::string sweep_to_yaml(const SweepConfig& cfg);

/// Deterministic in (config, seed). Episode order: object, pressure, offset_y, offset_z, repetition.
Dataset generate_dataset(const SweepConfig& config, std::uint64_t seed);

/// Seed for one episode derived from the master seed and the episode index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace softtouch::sim
