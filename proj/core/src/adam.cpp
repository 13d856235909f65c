#include "softtouch/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace softtouch::nn {

void adam_step(AdamState& s, std::span<double> theta, std::span<const double> grad, double lr) {
  if (theta.size() != grad.size() || s.m.size() != theta.size() || s.v.size() != theta.size()) {
    throw std::invalid_argument("adam_step: state, parameter and gradient sizes differ");
  }
  ++s.step;
  const double b1 = s.cfg.beta1, b2 = s.cfg.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(s.step));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    s.m[i] = b1 * s.m[i] + (1.0 - b1) * grad[i];
    s.v[i] = b2 * s.v[i] + (1.0 - b2) * grad[i] * grad[i];
    const double m_hat = s.m[i] / c1;
    const double v_hat = s.v[i] / c2;
    theta[i] -= lr * m_hat / (std::sqrt(v_hat) + s.cfg.eps);
  }
}

}  // namespace softtouch::nn
