#include "softtouch/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "softtouch/logging.hpp"

namespace softtouch::prep {

const std::vector<std::string>& raw_channel_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"input_pressure", "strain"};
    for (std::size_t j = 0; j < kTaxelCount; ++j) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "taxel_%02zu", j);
      n.emplace_back(buf);
    }
    return n;
  }();
  return names;
}

std::string_view to_string(FeatureSet fs) {
  static constexpr std::string_view names[] = {"t1", "t2", "t3", "t4", "t5", "t6", "t7"};
  return names[static_cast<int>(fs) - 1];
}

FeatureSet parse_feature_set(std::string_view s) {
  if (s.size() == 2 && (s[0] == 't' || s[0] == 'T') && s[1] >= '1' && s[1] <= '7') {
    return static_cast<FeatureSet>(s[1] - '0');
  }
  throw DataError("unknown feature set '" + std::string(s) + "' (expected t1..t7)");
}

std::vector<std::size_t> feature_channels(FeatureSet fs) {
  bool pressure = false, strain = false, taxels = false;
  switch (fs) {
    case FeatureSet::T1: pressure = true; break;
    case FeatureSet::T2: strain = true; break;
    case FeatureSet::T3: taxels = true; break;
    case FeatureSet::T4: pressure = strain = true; break;
    case FeatureSet::T5: pressure = taxels = true; break;
    case FeatureSet::T6: strain = taxels = true; break;
    case FeatureSet::T7: pressure = strain = taxels = true; break;
  }
  std::vector<std::size_t> idx;
  if (pressure) idx.push_back(0);
  if (strain) idx.push_back(1);
  if (taxels) {
    for (std::size_t j = 0; j < kTaxelCount; ++j) idx.push_back(2 + j);
  }
  return idx;
}

Matrix raw_channels(std::span<const SensorFrame> frames) {
  Matrix m(frames.size(), kRawChannels);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    auto row = m.row(i);
    row[0] = frames[i].input_pressure;
    row[1] = frames[i].strain;
    std::copy(frames[i].taxels.begin(), frames[i].taxels.end(), row.begin() + 2);
  }
  return m;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DataError("quantile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

RobustScalerParams fit_scaler(const Matrix& channels, std::vector<std::string> names) {
  if (channels.rows == 0 || channels.cols == 0) throw DataError("fit_scaler: empty input");
  if (channels.rows < 4) throw DataError("fit_scaler: need at least 4 samples per channel");
  if (names.size() != channels.cols) {
    names.clear();
    for (std::size_t c = 0; c < channels.cols; ++c) names.push_back("ch" + std::to_string(c));
  }
  RobustScalerParams p;
  p.channels = std::move(names);
  std::vector<double> column(channels.rows);
  for (std::size_t c = 0; c < channels.cols; ++c) {
    for (std::size_t r = 0; r < channels.rows; ++r) column[r] = channels(r, c);
    std::sort(column.begin(), column.end());
    p.median.push_back(quantile_sorted(column, 0.5));
    p.iqr.push_back(quantile_sorted(column, 0.75) - quantile_sorted(column, 0.25));
    if (p.is_constant(c)) log::debug("fit_scaler: channel " + p.channels[c] + " is constant, scale 1");
  }
  return p;
}

RobustScalerParams fit_scaler_on_train(const Dataset& episodes) {
  std::size_t rows = 0;
  for (const auto& ep : episodes) {
    if (ep.meta.is_train()) rows += ep.size();
  }
  Matrix all(rows, kRawChannels);
  std::size_t at = 0;
  for (const auto& ep : episodes) {
    if (!ep.meta.is_train()) continue;
    const Matrix m = raw_channels(ep.frames);
    std::copy(m.data.begin(), m.data.end(), all.data.begin() + static_cast<std::ptrdiff_t>(at * kRawChannels));
    at += m.rows;
  }
  return fit_scaler(all);
}

Matrix transform(const Matrix& channels, const RobustScalerParams& params) {
  if (channels.cols != params.median.size()) {
    std::ostringstream msg;
    msg << "transform: channel-count mismatch (" << channels.cols << " columns, scaler has "
        << params.median.size() << ")";
    throw DataError(msg.str());
  }
  Matrix out(channels.rows, channels.cols);
  for (std::size_t r = 0; r < channels.rows; ++r) {
    for (std::size_t c = 0; c < channels.cols; ++c) {
      out(r, c) = (channels(r, c) - params.median[c]) / params.scale(c);
    }
  }
  return out;
}

Matrix inverse_transform(const Matrix& scaled, const RobustScalerParams& params) {
  if (scaled.cols != params.median.size()) throw DataError("inverse_transform: channel-count mismatch");
  Matrix out(scaled.rows, scaled.cols);
  for (std::size_t r = 0; r < scaled.rows; ++r) {
    for (std::size_t c = 0; c < scaled.cols; ++c) {
      out(r, c) = scaled(r, c) * params.scale(c) + params.median[c];
    }
  }
  return out;
}

Matrix transform(std::span<const SensorFrame> frames, const RobustScalerParams& params, FeatureSet fs) {
  if (params.median.size() != kRawChannels) {
    std::ostringstream msg;
    msg << "transform: channel-count mismatch (scaler has " << params.median.size() << " channels, expected "
        << kRawChannels << ")";
    throw DataError(msg.str());
  }
  const auto cols = feature_channels(fs);
  Matrix out(frames.size(), cols.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    auto raw = [&f](std::size_t c) {
      return c == 0 ? f.input_pressure : c == 1 ? f.strain : f.taxels[c - 2];
    };
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const std::size_t c = cols[k];
      out(i, k) = (raw(c) - params.median[c]) / params.scale(c);
    }
  }
  return out;
}

std::string RobustScalerParams::to_json() const {
  nlohmann::json j;
  j["median"] = median;
  j["iqr"] = iqr;
  j["channels"] = channels;
  return j.dump(2) + "\n";
}

RobustScalerParams RobustScalerParams::from_json(const std::string& text) {
  RobustScalerParams p;
  try {
    const auto j = nlohmann::json::parse(text);
    p.median = j.at("median").get<std::vector<double>>();
    p.iqr = j.at("iqr").get<std::vector<double>>();
    p.channels = j.at("channels").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("scaler json: ") + e.what());
  }
  if (p.median.size() != p.iqr.size() || p.median.size() != p.channels.size()) {
    throw DataError("scaler json: median/iqr/channels lengths differ");
  }
  return p;
}

std::string RobustScalerParams::fingerprint() const {
  std::string out;
  char buf[32];
  for (std::size_t c = 0; c < median.size(); ++c) {
    out += channels[c];
    out += ':';
    auto r = std::to_chars(buf, buf + sizeof(buf), median[c]);
    out.append(buf, r.ptr);
    out += '/';
    r = std::to_chars(buf, buf + sizeof(buf), iqr[c]);
    out.append(buf, r.ptr);
    out += ';';
  }
  return out;
}

std::vector<WindowRef> window(std::size_t episode, std::size_t length, std::size_t window_length) {
  if (window_length == 0) throw std::invalid_argument("window length must be >= 1");
  std::vector<WindowRef> out;
  if (length < window_length) return out;
  out.reserve(length - window_length + 1);
  for (std::size_t end = window_length - 1; end < length; ++end) out.push_back({episode, end});
  return out;
}

SequenceDataset make_sequences(std::span<const Episode* const> episodes, const RobustScalerParams& params,
                               FeatureSet fs, std::size_t window_length) {
  SequenceDataset ds;
  ds.window = window_length;
  ds.dim = feature_channels(fs).size();
  for (const Episode* ep : episodes) {
    if (ep->size() < window_length) {
      log::warn("skipping episode with " + std::to_string(ep->size()) + " frames (window " +
                std::to_string(window_length) + ")");
      continue;
    }
    const std::size_t idx = ds.features.size();
    ds.features.push_back(transform(ep->frames, params, fs));
    ds.labels.push_back(ep->labels);
    auto w = window(idx, ep->size(), window_length);
    ds.windows.insert(ds.windows.end(), w.begin(), w.end());
  }
  return ds;
}

}  // namespace softtouch::prep
