#include "softtouch/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "softtouch/logging.hpp"

namespace softtouch {

std::size_t default_window(nn::Arch arch) { return arch == nn::Arch::MLP ? 1 : 20; }

std::string TrainedModel::to_json() const {
  nlohmann::json j;
  j["weights"] = nlohmann::json::parse(weights.to_json());
  j["scaler"] = nlohmann::json::parse(scaler.to_json());
  j["feature_set"] = std::string(prep::to_string(features));
  j["window"] = window;
  return j.dump() + "\n";
}

TrainedModel TrainedModel::from_json(const std::string& text) {
  TrainedModel m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.weights = nn::ModelWeights::from_json(j.at("weights").dump());
    m.scaler = prep::RobustScalerParams::from_json(j.at("scaler").dump());
    m.features = prep::parse_feature_set(j.at("feature_set").get<std::string>());
    m.window = j.at("window").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model json: ") + e.what());
  }
  if (m.window == 0) throw DataError("model json: window must be >= 1");
  if (m.weights.spec.in_dim != static_cast<int>(prep::feature_channels(m.features).size())) {
    throw DataError("model json: weights in_dim does not match feature set " +
                    std::string(prep::to_string(m.features)));
  }
  if (m.scaler.median.size() != prep::kRawChannels) throw DataError("model json: scaler must cover all raw channels");
  return m;
}

void TrainedModel::save(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write " + file.string());
  out << to_json();
  if (!out) throw DataError("write failed: " + file.string());
}

TrainedModel TrainedModel::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("no such file: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::vector<const Episode*> select(const Dataset& data, bool (*pred)(const ConditionMeta&)) {
  std::vector<const Episode*> out;
  for (const auto& ep : data) {
    if (pred(ep.meta)) out.push_back(&ep);
  }
  return out;
}

FitResult fit_model(const Dataset& data, nn::ModelSpec spec, prep::FeatureSet fs, const nn::TrainConfig& cfg,
                    std::size_t window) {
  if (window == 0) window = default_window(spec.arch);
  spec.in_dim = static_cast<int>(prep::feature_channels(fs).size());
  const auto train_eps = select(data, [](const ConditionMeta& m) { return m.is_train(); });
  const auto val_eps = select(data, [](const ConditionMeta& m) { return m.is_validation(); });
  if (train_eps.empty()) throw DataError("no training episodes (repetitions 1-3, not held out)");

  FitResult r;
  r.model.scaler = prep::fit_scaler_on_train(data);
  r.scaler_fingerprint = r.model.scaler.fingerprint();
  r.model.features = fs;
  r.model.window = window;
  const auto train_set = prep::make_sequences(train_eps, r.model.scaler, fs, window);
  const auto val_set = prep::make_sequences(val_eps, r.model.scaler, fs, window);
  r.training = nn::train(spec, cfg, train_set, val_set);
  r.model.weights = r.training.weights;
  if (r.model.scaler.fingerprint() != r.scaler_fingerprint) {
    throw std::logic_error("scaler parameters changed during training");
  }
  return r;
}

std::vector<ForceVector> estimate_stream(const TrainedModel& model, std::span<const SensorFrame> frames) {
  std::vector<ForceVector> out;
  if (frames.empty()) return out;
  const Matrix x = prep::transform(frames, model.scaler, model.features);
  const std::size_t L = model.window;
  const std::size_t d = x.cols;
  // Left-pad with copies of the first row so every frame has a full window.
  std::vector<double> padded((L - 1 + x.rows) * d);
  for (std::size_t i = 0; i + 1 < L; ++i) std::copy(x.data.begin(), x.data.begin() + static_cast<std::ptrdiff_t>(d),
                                                    padded.begin() + static_cast<std::ptrdiff_t>(i * d));
  std::copy(x.data.begin(), x.data.end(), padded.begin() + static_cast<std::ptrdiff_t>((L - 1) * d));

  nn::Network net(model.weights.spec);
  out.reserve(x.rows);
  for (std::size_t t = 0; t < x.rows; ++t) {
    const auto y = net.forward(model.weights.params, {padded.data() + t * d, L, d});
    out.push_back({y[0], y[1], y[2]});
  }
  return out;
}

nn::ErrorStats evaluate_episodes(const TrainedModel& model, std::span<const Episode* const> episodes) {
  const auto ds = prep::make_sequences(episodes, model.scaler, model.features, model.window);
  return nn::evaluate(model.weights, ds);
}

}  // namespace softtouch
