#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "softtouch/finger_sim.hpp"

namespace softtouch::sim {

SweepConfig SweepConfig::defaults() {
  SweepConfig c;
  c.objects = {{ObjectShape::Convex, 30.0, false},
               {ObjectShape::Convex, 22.5, false},
               {ObjectShape::Convex, 15.0, true},
               {ObjectShape::Concave, 30.0, false},
               {ObjectShape::Square, 20.0, false}};
  c.pressures = {0.0, 20.0, 40.0, 60.0};
  c.offsets_y = {-8.0, 0.0, 8.0};
  c.offsets_z = {-5.0, 0.0, 5.0};
  return c;
}

std::size_t SweepConfig::condition_count() const {
  return objects.size() * pressures.size() * offsets_y.size() * offsets_z.size();
}

std::size_t SweepConfig::episode_count() const {
  return condition_count() * static_cast<std::size_t>(repetitions) * static_cast<std::size_t>(n_fingers);
}

void SweepConfig::validate() const {
  if (condition_count() == 0) throw std::invalid_argument("empty sweep");
  if (repetitions < 1 || repetitions > 4) throw std::invalid_argument("repetitions must be in 1..4");
  if (n_fingers != 1 && n_fingers != 2) throw std::invalid_argument("n_fingers must be 1 or 2");
  if (!(friction_mu > 0.0)) throw std::invalid_argument("friction_mu must be > 0");
  for (double p : pressures) {
    if (p < 0.0 || p > 60.0) throw std::invalid_argument("pressures must lie in [0, 60] kPa");
  }
  schedule.validate();
  artifacts.validate();
}

namespace {

template <typename T>
void read_if(const YAML::Node& node, const char* key, T& out) {
  if (node && node[key]) out = node[key].as<T>();
}

std::vector<double> read_list(const YAML::Node& node, const char* key, std::vector<double> fallback) {
  if (!node[key]) return fallback;
  return node[key].as<std::vector<double>>();
}

}  // namespace

SweepConfig sweep_from_yaml(const std::string& text) {
  SweepConfig c = SweepConfig::defaults();
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw DataError(std::string("sweep config: ") + e.what());
  }
  if (!root || root.IsNull()) return c;
  const YAML::Node sweep = root["sweep"] ? root["sweep"] : root;
  try {
    if (sweep["objects"]) {
      c.objects.clear();
      for (const auto& o : sweep["objects"]) {
        ObjectSpec spec;
        spec.shape = parse_object_shape(o["shape"].as<std::string>());
        spec.size = o["size"].as<double>();
        spec.holdout = o["holdout"] ? o["holdout"].as<bool>() : false;
        c.objects.push_back(spec);
      }
    }
    c.pressures = read_list(sweep, "pressures", c.pressures);
    c.offsets_y = read_list(sweep, "offsets_y", c.offsets_y);
    c.offsets_z = read_list(sweep, "offsets_z", c.offsets_z);
    read_if(sweep, "repetitions", c.repetitions);
    read_if(sweep, "n_fingers", c.n_fingers);
    read_if(sweep, "friction_mu", c.friction_mu);
    read_if(sweep, "noise", c.noise);

    const auto s = sweep["schedule"];
    read_if(s, "precontact", c.schedule.precontact);
    read_if(s, "contact_ramp", c.schedule.contact_ramp);
    read_if(s, "settle", c.schedule.settle);
    read_if(s, "speed", c.schedule.speed);
    read_if(s, "distance", c.schedule.distance);
    read_if(s, "hold", c.schedule.hold);
    read_if(s, "release", c.schedule.release);
    read_if(s, "release_ramp", c.schedule.release_ramp);
    read_if(s, "extra_indentation", c.schedule.extra_indentation);
    read_if(s, "contact_shift", c.schedule.contact_shift);

    const auto a = sweep["artifacts"];
    read_if(a, "play_width", c.artifacts.play_width);
    read_if(a, "saturation_a", c.artifacts.saturation_a);
    read_if(a, "saturation_b", c.artifacts.saturation_b);
    if (a && a["crosstalk_neighbor"]) {
      c.artifacts.crosstalk = SensorArtifactModel::adjacent_crosstalk(a["crosstalk_neighbor"].as<double>());
    }
    read_if(a, "drift_rate", c.artifacts.drift_rate);
    read_if(a, "drift_amp", c.artifacts.drift_amp);
    read_if(a, "noise_sigma", c.artifacts.noise_sigma);
    read_if(a, "outlier_prob", c.artifacts.outlier_prob);
    read_if(a, "ft_noise_sigma", c.artifacts.ft_noise_sigma);

    const auto f = sweep["finger"];
    read_if(f, "k0_normal", c.finger.k0_normal);
    read_if(f, "pressure_stiffening", c.finger.pressure_stiffening);
    read_if(f, "k0_tangent", c.finger.k0_tangent);
    read_if(f, "tangent_offset_gain", c.finger.tangent_offset_gain);
    read_if(f, "base_indentation", c.finger.base_indentation);
    read_if(f, "indentation_per_kpa", c.finger.indentation_per_kpa);
    read_if(f, "indentation_per_offset_z", c.finger.indentation_per_offset_z);
    read_if(f, "strain_offset", c.finger.strain_offset);
    read_if(f, "min_indentation", c.finger.min_indentation);
    read_if(f, "strain_gain", c.finger.strain_gain);
    read_if(f, "tangent_strain_weight", c.finger.tangent_strain_weight);
    read_if(f, "two_finger_normal_share", c.finger.two_finger_normal_share);
  } catch (const YAML::Exception& e) {
    throw DataError(std::string("sweep config: ") + e.what());
  }
  return c;
}

SweepConfig load_sweep_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open sweep config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return sweep_from_yaml(ss.str());
}

std::string sweep_to_yaml(const SweepConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(12);
  out << YAML::BeginMap;
  out << YAML::Key << "objects" << YAML::Value << YAML::BeginSeq;
  for (const auto& o : c.objects) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "shape" << YAML::Value
        << std::string(to_string(o.shape)) << YAML::Key << "size" << YAML::Value << o.size
        << YAML::Key << "holdout" << YAML::Value << o.holdout << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "pressures" << YAML::Value << YAML::Flow << c.pressures;
  out << YAML::Key << "offsets_y" << YAML::Value << YAML::Flow << c.offsets_y;
  out << YAML::Key << "offsets_z" << YAML::Value << YAML::Flow << c.offsets_z;
  out << YAML::Key << "repetitions" << YAML::Value << c.repetitions;
  out << YAML::Key << "n_fingers" << YAML::Value << c.n_fingers;
  out << YAML::Key << "friction_mu" << YAML::Value << c.friction_mu;
  out << YAML::Key << "noise" << YAML::Value << c.noise;

  const auto& s = c.schedule;
  out << YAML::Key << "schedule" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "precontact" << YAML::Value << s.precontact;
  out << YAML::Key << "contact_ramp" << YAML::Value << s.contact_ramp;
  out << YAML::Key << "settle" << YAML::Value << s.settle;
  out << YAML::Key << "speed" << YAML::Value << s.speed;
  out << YAML::Key << "distance" << YAML::Value << s.distance;
  out << YAML::Key << "hold" << YAML::Value << s.hold;
  out << YAML::Key << "release" << YAML::Value << s.release;
  out << YAML::Key << "release_ramp" << YAML::Value << s.release_ramp;
  out << YAML::Key << "extra_indentation" << YAML::Value << s.extra_indentation;
  out << YAML::Key << "contact_shift" << YAML::Value << s.contact_shift;
  out << YAML::EndMap;

  const auto& a = c.artifacts;
  out << YAML::Key << "artifacts" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "play_width" << YAML::Value << a.play_width;
  out << YAML::Key << "saturation_a" << YAML::Value << a.saturation_a;
  out << YAML::Key << "saturation_b" << YAML::Value << a.saturation_b;
  out << YAML::Key << "crosstalk_neighbor" << YAML::Value
      << (a.crosstalk.data.empty() ? 0.0 : a.crosstalk(1, 0));
  out << YAML::Key << "drift_rate" << YAML::Value << a.drift_rate;
  out << YAML::Key << "drift_amp" << YAML::Value << a.drift_amp;
  out << YAML::Key << "noise_sigma" << YAML::Value << a.noise_sigma;
  out << YAML::Key << "outlier_prob" << YAML::Value << a.outlier_prob;
  out << YAML::Key << "ft_noise_sigma" << YAML::Value << a.ft_noise_sigma;
  out << YAML::EndMap;

  const auto& f = c.finger;
  out << YAML::Key << "finger" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "k0_normal" << YAML::Value << f.k0_normal;
  out << YAML::Key << "pressure_stiffening" << YAML::Value << f.pressure_stiffening;
  out << YAML::Key << "k0_tangent" << YAML::Value << f.k0_tangent;
  out << YAML::Key << "tangent_offset_gain" << YAML::Value << f.tangent_offset_gain;
  out << YAML::Key << "base_indentation" << YAML::Value << f.base_indentation;
  out << YAML::Key << "indentation_per_kpa" << YAML::Value << f.indentation_per_kpa;
  out << YAML::Key << "indentation_per_offset_z" << YAML::Value << f.indentation_per_offset_z;
  out << YAML::Key << "strain_offset" << YAML::Value << f.strain_offset;
  out << YAML::Key << "min_indentation" << YAML::Value << f.min_indentation;
  out << YAML::Key << "strain_gain" << YAML::Value << f.strain_gain;
  out << YAML::Key << "tangent_strain_weight" << YAML::Value << f.tangent_strain_weight;
  out << YAML::Key << "two_finger_normal_share" << YAML::Value << f.two_finger_normal_share;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

Dataset generate_dataset(const SweepConfig& config, std::uint64_t seed) {
  config.validate();
  Dataset out;
  out.reserve(config.episode_count());
  std::uint64_t index = 0;
  for (const auto& obj : config.objects) {
    for (double pressure : config.pressures) {
      for (double oy : config.offsets_y) {
        for (double oz : config.offsets_z) {
          for (int rep = 1; rep <= config.repetitions; ++rep, ++index) {
            ConditionMeta meta;
            meta.object_shape = obj.shape;
            meta.object_size = obj.size;
            meta.holdout = obj.holdout;
            meta.finger_pressure = pressure;
            meta.robot_offset_y = oy;
            meta.robot_offset_z = oz;
            meta.n_fingers = config.n_fingers;
            meta.friction_mu = config.friction_mu;
            meta.repetition = rep;

            SensorArtifactModel art = config.noise ? config.artifacts : SensorArtifactModel::identity();
            art.seed = derive_seed(seed, index);
            if (config.n_fingers == 1) {
              out.push_back(simulate_episode(meta, FingerModel::from_condition(meta, config.finger), art,
                                             config.schedule, config.finger));
            } else {
              auto grasp = simulate_grasp(meta, art, config.schedule, config.finger);
              for (auto& ep : grasp.fingers) out.push_back(std::move(ep));
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace softtouch::sim
