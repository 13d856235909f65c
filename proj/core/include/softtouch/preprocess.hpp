#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "softtouch/types.hpp"

namespace softtouch::prep {

/// Raw sensor channel order used by every channel matrix:
/// input_pressure, strain, taxel_00 .. taxel_11.
inline constexpr std::size_t kRawChannels = 2 + kTaxelCount;
const std::vector<std::string>& raw_channel_names();

/// Input feature combinations:
///   T1 input pressure, T2 strain, T3 taxels, T4 pressure+strain,
///   T5 pressure+taxels, T6 strain+taxels, T7 all.
enum class FeatureSet { T1 = 1, T2, T3, T4, T5, T6, T7 };

inline constexpr FeatureSet kAllFeatureSets[] = {FeatureSet::T1, FeatureSet::T2, FeatureSet::T3,
                                                 FeatureSet::T4, FeatureSet::T5, FeatureSet::T6,
                                                 FeatureSet::T7};

std::string_view to_string(FeatureSet fs);
FeatureSet parse_feature_set(std::string_view s);
/// Raw channel indices selected by a feature set, in raw order.
std::vector<std::size_t> feature_channels(FeatureSet fs);

/// One row per frame, kRawChannels columns.
Matrix raw_channels(std::span<const SensorFrame> frames);

struct RobustScalerParams {
  std::vector<double> median;
  std::vector<double> iqr;
  std::vector<std::string> channels;

  static constexpr double kConstantIqr = 1e-12;
  /// Divisor applied to a channel: its IQR, or 1 for constant channels.
  double scale(std::size_t c) const { return iqr[c] < kConstantIqr ? 1.0 : iqr[c]; }
  bool is_constant(std::size_t c) const { return iqr[c] < kConstantIqr; }

  std::string to_json() const;
  static RobustScalerParams from_json(const std::string& text);
  /// Stable text fingerprint of the fitted values, for leakage checks.
  std::string fingerprint() const;
};

/// q-th quantile (q in [0,1]) with linear interpolation between order statistics of `sorted`.
double quantile_sorted(std::span<const double> sorted, double q);

/// Median and IQR per column. Requires at least 4 rows; throws DataError otherwise.
RobustScalerParams fit_scaler(const Matrix& channels,
                              std::vector<std::string> names = raw_channel_names());

/// Fit on the training episodes of a dataset only.
RobustScalerParams fit_scaler_on_train(const Dataset& episodes);

/// (x - median) / IQR on every column. Column count must match the params.
Matrix transform(const Matrix& channels, const RobustScalerParams& params);
Matrix inverse_transform(const Matrix& scaled, const RobustScalerParams& params);

/// Selects the feature set's columns and scales them. Params must cover the raw channels.
Matrix transform(std::span<const SensorFrame> frames, const RobustScalerParams& params, FeatureSet fs);

struct WindowRef {
  std::size_t episode = 0;
  std::size_t end = 0;  // index of the last frame; the label is taken here
};

/// Scaled feature sequences plus stride-1 windows of a fixed length.
struct SequenceDataset {
  std::vector<Matrix> features;                 // per episode
  std::vector<std::vector<ForceVector>> labels;  // per episode
  std::vector<WindowRef> windows;
  std::size_t window = 1;
  std::size_t dim = 0;

  std::size_t size() const { return windows.size(); }
  /// Pointer to the first row of a window; rows are contiguous.
  const double* window_data(const WindowRef& w) const {
    return features[w.episode].data.data() + (w.end + 1 - window) * dim;
  }
  const ForceVector& label(const WindowRef& w) const { return labels[w.episode][w.end]; }
};

/// Window starts for one sequence: N - L + 1 windows when N >= L, none otherwise.
std::vector<WindowRef> window(std::size_t episode, std::size_t length, std::size_t window_length);

/// Builds windows for the given episodes. Episodes shorter than the window are skipped with a warning.
SequenceDataset make_sequences(std::span<const Episode* const> episodes, const RobustScalerParams& params,
                               FeatureSet fs, std::size_t window_length);

}  // namespace softtouch::prep
