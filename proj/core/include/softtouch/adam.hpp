#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace softtouch::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;
  AdamConfig cfg;

  explicit AdamState(std::size_t n = 0, AdamConfig c = {}) : m(n, 0.0), v(n, 0.0), cfg(c) {}
};

/// One bias-corrected ADAM update of `theta` in place. Throws std::invalid_argument on size mismatch.
void adam_step(AdamState& state, std::span<double> theta, std::span<const double> grad, double lr);

}  // namespace softtouch::nn
