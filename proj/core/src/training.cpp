#include "softtouch/training.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "softtouch/logging.hpp"

namespace softtouch::nn {

void TrainConfig::validate() const {
  if (batch_size == 0 || epochs < 1 || !(learning_rate > 0.0) || train_stride == 0 || eval_stride == 0) {
    throw std::invalid_argument("train config: batch_size, epochs, learning_rate and strides must be positive");
  }
}

void ErrorStats::add(const ForceVector& e, const ForceVector& y) {
  sse[0] += (e.fx - y.fx) * (e.fx - y.fx);
  sse[1] += (e.fy - y.fy) * (e.fy - y.fy);
  sse[2] += (e.fz - y.fz) * (e.fz - y.fz);
  ++n;
}

ErrorStats& ErrorStats::operator+=(const ErrorStats& o) {
  for (int k = 0; k < 3; ++k) sse[k] += o.sse[k];
  n += o.n;
  return *this;
}

double ErrorStats::rmse(int axis) const {
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(sse[axis] / static_cast<double>(n));
}

double ErrorStats::pooled() const {
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt((sse[0] + sse[1] + sse[2]) / (3.0 * static_cast<double>(n)));
}

ErrorStats evaluate(const ModelWeights& w, const prep::SequenceDataset& ds, std::size_t stride) {
  if (stride == 0) stride = 1;
  Network net(w.spec);
  ErrorStats stats;
  for (std::size_t i = 0; i < ds.windows.size(); i += stride) {
    const auto& ref = ds.windows[i];
    const auto y = net.forward(w.params, {ds.window_data(ref), ds.window, ds.dim});
    stats.add({y[0], y[1], y[2]}, ds.label(ref));
  }
  return stats;
}

TrainResult train(const ModelSpec& spec, const TrainConfig& cfg, const prep::SequenceDataset& train_set,
                  const prep::SequenceDataset& val_set) {
  spec.validate();
  cfg.validate();
  if (train_set.windows.empty()) throw DataError("train: empty training set");
  if (train_set.dim != static_cast<std::size_t>(spec.in_dim)) {
    std::ostringstream msg;
    msg << "train: features have width " << train_set.dim << " but the model expects " << spec.in_dim;
    throw DataError(msg.str());
  }
  if (!val_set.windows.empty() && val_set.dim != train_set.dim) throw DataError("train: validation width differs");

  TrainResult result;
  result.weights = ModelWeights::xavier(spec, cfg.init_seed);
  result.best = result.weights;
  double best_val = std::numeric_limits<double>::infinity();

  Network net(spec);
  AdamState adam(result.weights.params.size(), cfg.adam);
  std::mt19937_64 rng(cfg.shuffle_seed);
  std::vector<std::size_t> order;
  std::vector<Sample> batch;
  std::vector<double> grad;
  batch.reserve(cfg.batch_size);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    order.clear();
    const std::size_t phase = static_cast<std::size_t>(epoch) % cfg.train_stride;
    for (std::size_t i = phase; i < train_set.windows.size(); i += cfg.train_stride) order.push_back(i);
    if (order.empty()) order.push_back(0);
    // Fisher-Yates with raw engine output keeps the permutation identical across standard libraries.
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

    double sse = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t k = start; k < stop; ++k) {
        const auto& ref = train_set.windows[order[k]];
        batch.push_back({{train_set.window_data(ref), train_set.window, train_set.dim}, train_set.label(ref)});
      }
      const double loss = loss_and_gradient(result.weights.params, net, batch, grad);
      sse += loss * static_cast<double>(batch.size());
      adam_step(adam, result.weights.params, grad, cfg.learning_rate);
    }

    EpochStats st;
    st.epoch = epoch + 1;
    st.train_rmse = std::sqrt(sse / static_cast<double>(order.size()));
    st.val_rmse = std::numeric_limits<double>::quiet_NaN();
    if (!val_set.windows.empty()) {
      st.val_rmse = evaluate(result.weights, val_set, cfg.eval_stride).pooled();
      if (st.val_rmse < best_val) {
        best_val = st.val_rmse;
        result.best = result.weights;
        result.best_epoch = st.epoch;
      }
    } else {
      result.best = result.weights;
      result.best_epoch = st.epoch;
    }
    result.history.push_back(st);
    std::ostringstream msg;
    msg << to_string(spec.arch) << "(" << spec.layers << "," << spec.hidden << ") epoch " << st.epoch << "/"
        << cfg.epochs << " train " << st.train_rmse << " val " << st.val_rmse;
    log::info(msg.str());
  }
  return result;
}

}  // namespace softtouch::nn
