#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "softtouch/finger_sim.hpp"

namespace softtouch::sim {

SensorArtifactModel SensorArtifactModel::defaults() {
  SensorArtifactModel m;
  m.crosstalk = adjacent_crosstalk(0.15);
  return m;
}

SensorArtifactModel SensorArtifactModel::identity() {
  SensorArtifactModel m;
  m.play_width = 0.0;
  m.saturation_a = 1.0;
  m.saturation_b = 0.0;
  m.crosstalk = adjacent_crosstalk(0.0);
  m.drift_rate = 0.0;
  m.drift_amp = 0.0;
  m.noise_sigma = 0.0;
  m.outlier_prob = 0.0;
  m.ft_noise_sigma = 0.0;
  return m;
}

Matrix SensorArtifactModel::adjacent_crosstalk(double w) {
  Matrix c(kTaxelCount, kTaxelCount);
  for (std::size_t i = 0; i < kTaxelCount; ++i) {
    double off = 0.0;
    if (i > 0) {
      c(i, i - 1) = w;
      off += w;
    }
    if (i + 1 < kTaxelCount) {
      c(i, i + 1) = w;
      off += w;
    }
    c(i, i) = 1.0 - off;
  }
  return c;
}

void SensorArtifactModel::validate() const {
  if (play_width < 0.0) throw std::invalid_argument("play_width must be >= 0");
  if (!(saturation_a > 0.0) || saturation_b < 0.0) {
    throw std::invalid_argument("saturation needs a > 0 and b >= 0");
  }
  if (noise_sigma < 0.0 || ft_noise_sigma < 0.0) throw std::invalid_argument("noise sigma must be >= 0");
  if (outlier_prob < 0.0 || outlier_prob > 1.0) throw std::invalid_argument("outlier_prob outside [0, 1]");
  if (drift_rate < 0.0) throw std::invalid_argument("drift_rate must be >= 0");
  if (crosstalk.data.empty()) return;
  if (crosstalk.rows != kTaxelCount || crosstalk.cols != kTaxelCount) {
    throw std::invalid_argument("crosstalk must be 12x12");
  }
  for (std::size_t i = 0; i < kTaxelCount; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < kTaxelCount; ++j) {
      if (crosstalk(i, j) < 0.0) throw std::invalid_argument("crosstalk entries must be >= 0");
      sum += crosstalk(i, j);
    }
    if (std::abs(sum - 1.0) > 1e-9 || crosstalk(i, i) < 0.65) {
      std::ostringstream msg;
      msg << "crosstalk row " << i << " must sum to 1 with diagonal >= 0.65";
      throw std::invalid_argument(msg.str());
    }
  }
}

double saturate(double f, double a, double b) { return a * f / (1.0 + b * std::abs(f)); }

double PlayOperator::step(double x) {
  if (!primed_) {
    y_ = x;
    primed_ = true;
    return y_;
  }
  y_ = std::max(x - w_, std::min(x + w_, y_));
  return y_;
}

std::vector<SensorReading> corrupt_channels(std::span<const CleanSample> clean,
                                            const SensorArtifactModel& art) {
  art.validate();
  constexpr std::size_t kChannels = kTaxelCount + 1;  // strain first
  std::mt19937_64 rng(art.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::array<double, kChannels> drift_scale{};
  for (auto& d : drift_scale) d = art.drift_amp * (2.0 * unit(rng) - 1.0);

  std::vector<PlayOperator> play(kChannels, PlayOperator(art.play_width));
  std::array<double, kChannels> baseline{};
  const bool mix = !art.crosstalk.data.empty();

  std::vector<SensorReading> out;
  out.reserve(clean.size());
  std::array<double, kTaxelCount> hyst{};
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const auto& in = clean[i];
    std::array<double, kChannels> v{};

    v[0] = play[0].step(saturate(in.strain, art.saturation_a, art.saturation_b));
    for (std::size_t j = 0; j < kTaxelCount; ++j) {
      hyst[j] = play[j + 1].step(saturate(in.taxel_forces[j], art.saturation_a, art.saturation_b));
    }
    for (std::size_t j = 0; j < kTaxelCount; ++j) {
      if (mix) {
        double acc = 0.0;
        for (std::size_t k = 0; k < kTaxelCount; ++k) acc += art.crosstalk(j, k) * hyst[k];
        v[j + 1] = acc;
      } else {
        v[j + 1] = hyst[j];
      }
    }

    const double drift = 1.0 - std::exp(-art.drift_rate * in.t);
    for (std::size_t c = 0; c < kChannels; ++c) {
      v[c] += drift * drift_scale[c];
      if (i == 0) baseline[c] = v[c];
      if (art.noise_sigma > 0.0) v[c] += art.noise_sigma * gauss(rng);
      if (art.outlier_prob > 0.0 && unit(rng) < art.outlier_prob) {
        v[c] = baseline[c] + 10.0 * art.noise_sigma;
      }
    }

    SensorReading r;
    r.strain = v[0];
    std::copy(v.begin() + 1, v.end(), r.taxels.begin());
    out.push_back(r);
  }
  return out;
}

}  // namespace softtouch::sim
