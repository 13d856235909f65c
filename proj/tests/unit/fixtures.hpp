#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "softtouch/finger_sim.hpp"

namespace testing_fixtures {

// A trained object and a held-out one, one pressure, four short repetitions each.
inline softtouch::sim::SweepConfig small_sweep() {
  using namespace softtouch;
  sim::SweepConfig cfg;
  cfg.objects = {{ObjectShape::Convex, 30.0, false}, {ObjectShape::Square, 20.0, false},
                 {ObjectShape::Convex, 15.0, true}};
  cfg.pressures = {20.0};
  cfg.offsets_y = {0.0};
  cfg.offsets_z = {0.0};
  cfg.schedule.settle = 0.5;
  cfg.schedule.distance = 4.0;
  return cfg;
}

inline const softtouch::Dataset& small_dataset() {
  static const softtouch::Dataset data = softtouch::sim::generate_dataset(small_sweep(), 7);
  return data;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  static std::mt19937_64 rng(std::random_device{}());
  auto p = std::filesystem::temp_directory_path() / ("softtouch_" + name + "_" + std::to_string(rng() % 1000000007));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing_fixtures
