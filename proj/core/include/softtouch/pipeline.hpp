#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "softtouch/network.hpp"
#include "softtouch/preprocess.hpp"
#include "softtouch/training.hpp"

namespace softtouch {

/// Everything needed to turn raw sensor frames into force estimates.
struct TrainedModel {
  nn::ModelWeights weights;
  prep::RobustScalerParams scaler;
  prep::FeatureSet features = prep::FeatureSet::T7;
  std::size_t window = 20;

  std::string to_json() const;
  static TrainedModel from_json(const std::string& text);
  void save(const std::filesystem::path& file) const;
  static TrainedModel load(const std::filesystem::path& file);
};

/// 20 frames (0.2 s) for recurrent models, 1 for the MLP.
std::size_t default_window(nn::Arch arch);

struct FitResult {
  TrainedModel model;        // final-epoch weights
  nn::TrainResult training;
  std::string scaler_fingerprint;
};

/// Fits the scaler on training episodes (repetitions 1-3, not held out), trains on them and tracks
/// validation RMSE on repetition-4 episodes. spec.in_dim is set from the feature set; window 0
/// selects default_window(spec.arch).
FitResult fit_model(const Dataset& data, nn::ModelSpec spec, prep::FeatureSet fs, const nn::TrainConfig& cfg,
                    std::size_t window = 0);

/// Per-frame estimates for a raw frame stream. Frames before the first full window see the first
/// frame repeated on the left.
std::vector<ForceVector> estimate_stream(const TrainedModel& model, std::span<const SensorFrame> frames);

/// Errors of a model over the given episodes (all windows, stride 1).
nn::ErrorStats evaluate_episodes(const TrainedModel& model, std::span<const Episode* const> episodes);

std::vector<const Episode*> select(const Dataset& data, bool (*pred)(const ConditionMeta&));

}  // namespace softtouch
