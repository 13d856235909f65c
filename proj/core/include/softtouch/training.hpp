#pragma once

#include <cstdint>
#include <vector>

#include "softtouch/adam.hpp"
#include "softtouch/network.hpp"
#include "softtouch/preprocess.hpp"

namespace softtouch::nn {

struct TrainConfig {
  std::size_t batch_size = 32;
  int epochs = 50;
  double learning_rate = 1e-3;
  AdamConfig adam;
  std::uint64_t shuffle_seed = 0;
  std::uint64_t init_seed = 0;
  /// Each epoch visits every train_stride-th window, with the phase rotating by one per epoch so
  /// consecutive epochs cover different (heavily overlapping) windows. 1 visits every window.
  std::size_t train_stride = 8;
  /// Subsampling of validation windows for the per-epoch history only.
  std::size_t eval_stride = 4;

  void validate() const;
};

/// Sum of squared errors per axis; RMSEs are derived on demand so groups can be pooled exactly.
struct ErrorStats {
  std::array<double, 3> sse{};
  std::size_t n = 0;

  void add(const ForceVector& estimate, const ForceVector& truth);
  ErrorStats& operator+=(const ErrorStats& o);
  double rmse(int axis) const;
  /// sqrt of the mean over axes and samples.
  double pooled() const;
};

struct EpochStats {
  int epoch = 0;
  double train_rmse = 0.0;  // running loss over the epoch's batches, before each update
  double val_rmse = 0.0;    // NaN without a validation set
};

struct TrainResult {
  ModelWeights weights;  // after the final epoch
  ModelWeights best;     // lowest validation RMSE seen (final weights without a validation set)
  int best_epoch = 0;
  std::vector<EpochStats> history;
};

/// Xavier init from init_seed, shuffled mini-batches from shuffle_seed, ADAM on MSE.
/// Throws DataError on an empty training set or a feature width that does not match spec.in_dim.
TrainResult train(const ModelSpec& spec, const TrainConfig& cfg, const prep::SequenceDataset& train_set,
                  const prep::SequenceDataset& val_set);

/// Errors over every `stride`-th window of a dataset.
ErrorStats evaluate(const ModelWeights& w, const prep::SequenceDataset& ds, std::size_t stride = 1);

}  // namespace softtouch::nn
