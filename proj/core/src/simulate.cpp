#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "softtouch/finger_sim.hpp"

namespace softtouch::sim {

namespace {

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

std::size_t frames_for(double seconds) {
  return static_cast<std::size_t>(std::llround(std::max(0.0, seconds) / kSamplePeriod));
}

// Fraction of a ramp completed at the given frame (counted from 0) of that ramp.
double ramp_fraction(std::size_t frame, double ramp_seconds) {
  if (ramp_seconds <= 0.0) return 1.0;
  return smoothstep(static_cast<double>(frame + 1) * kSamplePeriod / ramp_seconds);
}

constexpr double kCoulombTolerance = 1e-9;

}  // namespace

void MotionSchedule::validate() const {
  if (precontact < 0.0 || settle < 0.0 || hold < 0.0 || release < 0.0 || distance < 0.0) {
    throw std::invalid_argument("motion schedule durations must be >= 0");
  }
  if (distance > 0.0 && !(speed > 0.0)) throw std::invalid_argument("motion schedule speed must be > 0");
  if (frames_for(settle) + frames_for(move_duration()) + frames_for(hold) == 0) {
    throw std::invalid_argument("no contact phase");
  }
}

Episode simulate_episode(const ConditionMeta& meta, const FingerModel& finger,
                         const SensorArtifactModel& artifacts, const MotionSchedule& schedule,
                         const FingerParams& params, const TaxelLayout& layout) {
  meta.validate();
  finger.validate();
  schedule.validate();
  layout.validate();

  const std::size_t i_contact = frames_for(schedule.precontact);
  const std::size_t i_move = i_contact + frames_for(schedule.settle);
  const std::size_t n_move = frames_for(schedule.move_duration());
  const std::size_t i_release = i_move + n_move + frames_for(schedule.hold);
  const std::size_t n_release = frames_for(schedule.release);
  const std::size_t n_frames = i_release + n_release;
  const double move_seconds = static_cast<double>(n_move) * kSamplePeriod;

  Episode ep;
  ep.meta = meta;
  ep.frames.resize(n_frames);
  ep.labels.resize(n_frames);
  ep.phases.resize(n_frames);

  std::vector<CleanSample> clean(n_frames);
  double deflection = 0.0;
  double prev_x = 0.0;
  bool logged_clamp = false;

  for (std::size_t i = 0; i < n_frames; ++i) {
    const double t = static_cast<double>(i) * kSamplePeriod;
    auto& frame = ep.frames[i];
    auto& mark = ep.phases[i];
    frame.t = t;

    double pressure = meta.finger_pressure;
    if (i < i_contact) {
      mark.phase = Phase::PreContact;
      pressure *= static_cast<double>(i) / static_cast<double>(i_contact);
    } else if (i < i_move) {
      mark.phase = Phase::ContactSettle;
    } else if (i < i_release) {
      mark.phase = Phase::Moving;
    } else {
      mark.phase = Phase::Released;
      pressure *= 1.0 - static_cast<double>(i - i_release + 1) / static_cast<double>(n_release);
    }
    frame.input_pressure = std::max(0.0, pressure);

    double progress = 0.0;
    if (i >= i_move) {
      progress = move_seconds > 0.0
                     ? std::min(1.0, static_cast<double>(i - i_move) * kSamplePeriod / move_seconds)
                     : 1.0;
    }

    FingerState state;
    if (i >= i_contact) {
      state.indentation = finger.rest_indentation * ramp_fraction(i - i_contact, schedule.contact_ramp) +
                          schedule.extra_indentation * progress;
      if (i >= i_release) state.indentation *= 1.0 - ramp_fraction(i - i_release, schedule.release_ramp);
    }
    state.contact_shift = schedule.contact_shift * progress;
    state.normal_force = finger.k_normal * state.indentation;

    const double x = i >= i_move
                         ? std::min(schedule.distance,
                                    schedule.speed * static_cast<double>(i - i_move) * kSamplePeriod)
                         : 0.0;
    const double limit = finger.mu * state.normal_force;
    if (state.normal_force <= 0.0) {
      deflection = 0.0;
      mark.is_slipping = false;
    } else {
      deflection += x - prev_x;
      if (finger.k_tangent * std::abs(deflection) >= limit - kCoulombTolerance) {
        deflection = std::copysign(limit / finger.k_tangent, deflection == 0.0 ? 1.0 : deflection);
        mark.is_slipping = true;
      } else {
        mark.is_slipping = false;
      }
    }
    prev_x = x;
    state.tangential_deflection = deflection;

    const auto proj = clean_sensor_projection(state, meta, layout, params);
    if (proj.center_clamped && !logged_clamp) {
      std::ostringstream note;
      note << "contact center clamped to taxel span at frame " << i;
      ep.log.push_back(note.str());
      logged_clamp = true;
    }
    const auto& u = proj.normal_direction;
    ep.labels[i] = {finger.k_tangent * deflection + state.normal_force * u[0],
                    state.normal_force * u[1], state.normal_force * u[2]};

    clean[i].t = t;
    clean[i].strain = proj.strain;
    clean[i].taxel_forces = proj.taxel_forces;
  }

  const auto readings = corrupt_channels(clean, artifacts);
  for (std::size_t i = 0; i < n_frames; ++i) {
    ep.frames[i].strain = readings[i].strain;
    ep.frames[i].taxels = readings[i].taxels;
  }

  if (artifacts.ft_noise_sigma > 0.0) {
    std::mt19937_64 rng(derive_seed(artifacts.seed, 0x46545345ULL));
    std::normal_distribution<double> gauss(0.0, artifacts.ft_noise_sigma);
    for (auto& l : ep.labels) {
      l.fx += gauss(rng);
      l.fy += gauss(rng);
      l.fz += gauss(rng);
    }
  }
  return ep;
}

GraspEpisode simulate_grasp(const ConditionMeta& meta, const SensorArtifactModel& artifacts,
                            const MotionSchedule& schedule, const FingerParams& params) {
  GraspEpisode grasp;
  for (int f = 0; f < meta.n_fingers; ++f) {
    ConditionMeta m = meta;
    m.finger_index = f;
    FingerModel model = FingerModel::from_condition(m, params);
    if (meta.n_fingers > 1) model.k_normal *= params.two_finger_normal_share;
    SensorArtifactModel art = artifacts;
    art.seed = derive_seed(artifacts.seed, static_cast<std::uint64_t>(f));
    Episode ep = simulate_episode(m, model, art, schedule, params);
    if (f % 2 == 1) {
      for (auto& l : ep.labels) l.fy = -l.fy;
    }
    grasp.fingers.push_back(std::move(ep));
  }
  const std::size_t n = grasp.fingers.front().size();
  grasp.forces.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<ForceVector> per;
    for (const auto& ep : grasp.fingers) per.push_back(ep.labels[i]);
    grasp.forces.push_back(GraspForces::from_fingers(std::move(per)));
  }
  return grasp;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 over the pair
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace softtouch::sim
