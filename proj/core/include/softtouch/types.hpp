#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace softtouch {

// Units throughout: newtons, kilopascals, millimeters, seconds.

inline constexpr std::size_t kTaxelCount = 12;
inline constexpr double kSamplePeriod = 0.01;  // 100 Hz
inline constexpr double kDefaultNormalEpsilon = 0.05;

/// Invalid or inconsistent input data (bad files, schema violations, contract breaches).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vec3 = std::array<double, 3>;

/// Total force a finger exerts on the grasped object.
struct ForceVector {
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;

  double norm() const;
  bool is_finite() const;
  std::array<double, 3> as_array() const { return {fx, fy, fz}; }

  ForceVector& operator+=(const ForceVector& o) {
    fx += o.fx;
    fy += o.fy;
    fz += o.fz;
    return *this;
  }
  friend ForceVector operator+(ForceVector a, const ForceVector& b) { return a += b; }
  friend ForceVector operator-(const ForceVector& a, const ForceVector& b) {
    return {a.fx - b.fx, a.fy - b.fy, a.fz - b.fz};
  }
  friend ForceVector operator*(double s, const ForceVector& f) {
    return {s * f.fx, s * f.fy, s * f.fz};
  }
  friend bool operator==(const ForceVector&, const ForceVector&) = default;
};

/// Normal force, friction force and their ratio. The ratio is absent when the
/// normal force does not exceed the contact epsilon.
struct FrictionFeatures {
  double f_n = 0.0;
  double f_f = 0.0;
  std::optional<double> ratio;
  double signed_f_f = 0.0;  // F_x with its sign, for direction-aware consumers
};

/// F_n = sqrt(fy^2 + fz^2), F_f = |fx|.
FrictionFeatures friction_features(const ForceVector& f,
                                   double normal_eps = kDefaultNormalEpsilon);

/// Component-wise sum over fingers. Throws std::invalid_argument("no fingers") on empty input.
ForceVector sum_finger_forces(std::span<const ForceVector> fingers);

struct GraspForces {
  std::vector<ForceVector> per_finger;
  ForceVector external;

  static GraspForces from_fingers(std::vector<ForceVector> fingers);
};

/// Taxel normals and positions along the finger surface. Normals are unit vectors.
struct TaxelLayout {
  std::vector<Vec3> normals;
  std::vector<Vec3> positions;  // mm

  std::size_t count() const { return normals.size(); }
  void validate() const;

  /// 12 taxels in a line along the finger, 8 mm pitch, normals fanning
  /// around +y in the y-z plane at a constant angular increment.
  static TaxelLayout standard();
  static constexpr double kStandardPitch = 8.0;             // mm
  static constexpr double kStandardAngleStep = std::numbers::pi / 36.0;  // 5 degrees
};

/// F^n = sum_j f_j n_j. Throws std::invalid_argument on length mismatch or a negative taxel force.
ForceVector pressure_normal_force(std::span<const double> taxel_forces, const TaxelLayout& layout);

struct SensorFrame {
  double t = 0.0;
  double input_pressure = 0.0;  // kPa, commanded
  double strain = 0.0;
  std::array<double, kTaxelCount> taxels{};
};

enum class ObjectShape { Convex, Concave, Square };

std::string_view to_string(ObjectShape s);
ObjectShape parse_object_shape(std::string_view s);

struct ConditionMeta {
  ObjectShape object_shape = ObjectShape::Convex;
  double object_size = 30.0;  // radius or half-width, mm
  double finger_pressure = 0.0;
  double robot_offset_y = 0.0;
  double robot_offset_z = 0.0;
  int n_fingers = 1;
  double friction_mu = 0.6;
  int repetition = 1;
  bool holdout = false;   // never used for training
  int finger_index = 0;   // which finger of a multi-finger grasp this episode records

  bool is_train() const { return repetition <= 3 && !holdout; }
  bool is_validation() const { return repetition == 4 && !holdout; }
  void validate() const;
};

enum class Phase { PreContact, ContactSettle, Moving, Released };

std::string_view to_string(Phase p);
Phase parse_phase(std::string_view s);

struct PhaseMark {
  Phase phase = Phase::PreContact;
  bool is_slipping = false;
};

struct Episode {
  ConditionMeta meta;
  std::vector<SensorFrame> frames;
  std::vector<ForceVector> labels;
  std::vector<PhaseMark> phases;
  std::vector<std::string> log;  // simulator notes, e.g. clamped contact centers

  std::size_t size() const { return frames.size(); }
  /// Checks equal lengths, uniform 0.01 s timestamps and phase flag consistency.
  void validate() const;
  /// Index of the first frame in the given phase, if any (T_c for ContactSettle, T_m for Moving).
  std::optional<std::size_t> first_frame_of(Phase p) const;
};

using Dataset = std::vector<Episode>;

/// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

}  // namespace softtouch
