#include "softtouch/types.hpp"

#include <cmath>
#include <sstream>

namespace softtouch {

double ForceVector::norm() const { return std::hypot(fx, fy, fz); }

bool ForceVector::is_finite() const {
  return std::isfinite(fx) && std::isfinite(fy) && std::isfinite(fz);
}

FrictionFeatures friction_features(const ForceVector& f, double normal_eps) {
  FrictionFeatures out;
  out.f_n = std::hypot(f.fy, f.fz);
  out.f_f = std::abs(f.fx);
  out.signed_f_f = f.fx;
  if (out.f_n > normal_eps) out.ratio = out.f_f / out.f_n;
  return out;
}

ForceVector sum_finger_forces(std::span<const ForceVector> fingers) {
  if (fingers.empty()) throw std::invalid_argument("no fingers");
  ForceVector total;
  for (const auto& f : fingers) total += f;
  return total;
}

GraspForces GraspForces::from_fingers(std::vector<ForceVector> fingers) {
  GraspForces g;
  g.external = sum_finger_forces(fingers);
  g.per_finger = std::move(fingers);
  return g;
}

void TaxelLayout::validate() const {
  if (normals.size() != positions.size()) {
    throw std::invalid_argument("taxel layout: normals and positions differ in length");
  }
  for (std::size_t j = 0; j < normals.size(); ++j) {
    const auto& n = normals[j];
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (std::abs(len - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "taxel layout: normal " << j << " has norm " << len;
      throw std::invalid_argument(msg.str());
    }
  }
}

TaxelLayout TaxelLayout::standard() {
  TaxelLayout layout;
  const double mid = 0.5 * static_cast<double>(kTaxelCount - 1);
  for (std::size_t j = 0; j < kTaxelCount; ++j) {
    const double angle = (static_cast<double>(j) - mid) * kStandardAngleStep;
    layout.normals.push_back({0.0, std::cos(angle), std::sin(angle)});
    layout.positions.push_back({0.0, 0.0, kStandardPitch * static_cast<double>(j)});
  }
  return layout;
}

ForceVector pressure_normal_force(std::span<const double> taxel_forces, const TaxelLayout& layout) {
  if (taxel_forces.size() != layout.count()) {
    throw std::invalid_argument("pressure_normal_force: taxel count mismatch");
  }
  ForceVector total;
  for (std::size_t j = 0; j < taxel_forces.size(); ++j) {
    const double f = taxel_forces[j];
    if (f < 0.0) {
      std::ostringstream msg;
      msg << "tension at taxel " << j;
      throw std::invalid_argument(msg.str());
    }
    const auto& n = layout.normals[j];
    total.fx += f * n[0];
    total.fy += f * n[1];
    total.fz += f * n[2];
  }
  return total;
}

std::string_view to_string(ObjectShape s) {
  switch (s) {
    case ObjectShape::Convex: return "convex";
    case ObjectShape::Concave: return "concave";
    case ObjectShape::Square: return "square";
  }
  return "unknown";
}

ObjectShape parse_object_shape(std::string_view s) {
  if (s == "convex") return ObjectShape::Convex;
  if (s == "concave") return ObjectShape::Concave;
  if (s == "square") return ObjectShape::Square;
  throw DataError("unknown object shape '" + std::string(s) + "'");
}

void ConditionMeta::validate() const {
  if (repetition < 1 || repetition > 4) {
    throw DataError("repetition must be in 1..4, got " + std::to_string(repetition));
  }
  if (!(friction_mu > 0.0)) throw DataError("friction_mu must be positive");
  if (n_fingers != 1 && n_fingers != 2) throw DataError("n_fingers must be 1 or 2");
  if (!(object_size > 0.0)) throw DataError("object_size must be positive");
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::PreContact: return "pre_contact";
    case Phase::ContactSettle: return "contact_settle";
    case Phase::Moving: return "moving";
    case Phase::Released: return "released";
  }
  return "unknown";
}

Phase parse_phase(std::string_view s) {
  if (s == "pre_contact") return Phase::PreContact;
  if (s == "contact_settle") return Phase::ContactSettle;
  if (s == "moving") return Phase::Moving;
  if (s == "released") return Phase::Released;
  throw DataError("unknown phase '" + std::string(s) + "'");
}

void Episode::validate() const {
  if (frames.size() != labels.size() || frames.size() != phases.size()) {
    throw DataError("episode: frames, labels and phases differ in length");
  }
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const double dt = frames[i].t - frames[i - 1].t;
    if (std::abs(dt - kSamplePeriod) > 1e-6) {
      std::ostringstream msg;
      msg << "episode: non-uniform sample spacing " << dt << " s at frame " << i;
      throw DataError(msg.str());
    }
  }
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (phases[i].phase == Phase::PreContact && phases[i].is_slipping) {
      throw DataError("episode: pre-contact frame " + std::to_string(i) + " marked slipping");
    }
  }
}

std::optional<std::size_t> Episode::first_frame_of(Phase p) const {
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (phases[i].phase == p) return i;
  }
  return std::nullopt;
}

}  // namespace softtouch
