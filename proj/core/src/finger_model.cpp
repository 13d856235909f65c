#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "softtouch/finger_sim.hpp"

namespace softtouch::sim {

double normal_size_factor(ObjectShape shape, double size) {
  switch (shape) {
    case ObjectShape::Convex: return 0.7 + 0.01 * size;
    case ObjectShape::Concave: return 1.2;
    case ObjectShape::Square: return 0.8 + 0.005 * size;
  }
  return 1.0;
}

double tangent_size_factor(ObjectShape shape, double size) {
  switch (shape) {
    case ObjectShape::Convex: return 0.8 + 0.006 * size;
    case ObjectShape::Concave: return 1.1;
    case ObjectShape::Square: return 0.85 + 0.005 * size;
  }
  return 1.0;
}

double patch_half_width(ObjectShape shape, double size) {
  switch (shape) {
    case ObjectShape::Convex: return 10.0 + 0.2 * size;
    case ObjectShape::Concave: return 20.0;
    case ObjectShape::Square: return 12.0;
  }
  return 12.0;
}

FingerModel FingerModel::from_condition(const ConditionMeta& meta, const FingerParams& p) {
  FingerModel m;
  m.k_normal = p.k0_normal * (1.0 + p.pressure_stiffening * meta.finger_pressure) *
               normal_size_factor(meta.object_shape, meta.object_size);
  m.k_tangent = p.k0_tangent * tangent_size_factor(meta.object_shape, meta.object_size) *
                (1.0 + p.tangent_offset_gain * std::abs(meta.robot_offset_y));
  m.rest_indentation = std::max(p.min_indentation,
                                p.base_indentation + p.indentation_per_kpa * meta.finger_pressure -
                                    p.indentation_per_offset_z * meta.robot_offset_z);
  m.mu = meta.friction_mu;
  return m;
}

void FingerModel::validate() const {
  if (!(k_normal > 0.0) || !(k_tangent > 0.0) || !(mu > 0.0)) {
    std::ostringstream msg;
    msg << "finger model needs positive stiffness and friction (k_normal=" << k_normal
        << ", k_tangent=" << k_tangent << ", mu=" << mu << ")";
    throw std::invalid_argument(msg.str());
  }
  if (rest_indentation < 0.0) throw std::invalid_argument("rest_indentation must be >= 0");
}

CleanProjection clean_sensor_projection(const FingerState& state, const ConditionMeta& meta,
                                        const TaxelLayout& layout, const FingerParams& params) {
  if (state.normal_force < 0.0) throw std::invalid_argument("clean_sensor_projection: F_n < 0");
  if (layout.count() != kTaxelCount) {
    throw std::invalid_argument("clean_sensor_projection: layout must have 12 taxels");
  }

  CleanProjection out;
  out.strain = params.strain_offset +
               params.strain_gain * (state.indentation +
                                     params.tangent_strain_weight * std::abs(state.tangential_deflection));

  // Arc coordinate of each taxel is its position along the finger axis (z).
  const double first = layout.positions.front()[2];
  const double last = layout.positions.back()[2];
  double center = 0.5 * (first + last) + meta.robot_offset_y + state.contact_shift;
  if (center < first || center > last) {
    center = std::clamp(center, first, last);
    out.center_clamped = true;
  }

  const double half_width = patch_half_width(meta.object_shape, meta.object_size);
  std::array<double, kTaxelCount> weights{};
  Vec3 dir{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < kTaxelCount; ++j) {
    const double d = layout.positions[j][2] - center;
    if (std::abs(d) < half_width) {
      const double c = std::cos(0.5 * std::numbers::pi * d / half_width);
      weights[j] = c * c;
    }
    for (int k = 0; k < 3; ++k) dir[k] += weights[j] * layout.normals[j][k];
  }
  const double len = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
  for (int k = 0; k < 3; ++k) out.normal_direction[k] = dir[k] / len;

  if (state.normal_force > 0.0) {
    const double scale = state.normal_force / len;
    for (std::size_t j = 0; j < kTaxelCount; ++j) out.taxel_forces[j] = weights[j] * scale;
  }
  return out;
}

}  // namespace softtouch::sim
