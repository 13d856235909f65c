#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "softtouch/training.hpp"

using namespace softtouch;
using namespace softtouch::nn;

namespace {

// One feature column; labels are a fixed linear map of it.
prep::SequenceDataset linear_set(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  prep::SequenceDataset ds;
  ds.window = 1;
  ds.dim = 1;
  Matrix f(n, 1);
  std::vector<ForceVector> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u(rng);
    f(i, 0) = x;
    y[i] = {0.5 * x + 0.2, -0.3 * x, 0.1};
  }
  ds.features.push_back(std::move(f));
  ds.labels.push_back(std::move(y));
  ds.windows = prep::window(0, n, 1);
  return ds;
}

}  // namespace

TEST(ErrorStats, PoolingMatchesDirectComputation) {
  ErrorStats a, b, all;
  const ForceVector truth{1, 2, 3};
  a.add({1.5, 2, 3}, truth);
  b.add({1, 1, 3}, truth);
  b.add({1, 2, 5}, truth);
  all.add({1.5, 2, 3}, truth);
  all.add({1, 1, 3}, truth);
  all.add({1, 2, 5}, truth);
  a += b;
  EXPECT_EQ(a.n, 3u);
  EXPECT_DOUBLE_EQ(a.pooled(), all.pooled());
  EXPECT_DOUBLE_EQ(a.pooled(), std::sqrt((0.25 + 1 + 4) / 9.0));
  EXPECT_DOUBLE_EQ(a.rmse(0), std::sqrt(0.25 / 3));
  EXPECT_DOUBLE_EQ(a.rmse(2), std::sqrt(4.0 / 3));
}

TEST(TrainConfig, ValidateRejectsBadValues) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.learning_rate = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.train_stride = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Train, RecoversALinearMap) {
  const auto tr = linear_set(16000, 1);
  const auto va = linear_set(500, 2);
  TrainConfig cfg;
  cfg.train_stride = 1;
  cfg.eval_stride = 1;
  cfg.init_seed = 3;
  cfg.shuffle_seed = 4;
  const auto r = train({Arch::MLP, 1, 10, 1, 3}, cfg, tr, va);
  ASSERT_EQ(r.history.size(), 50u);
  EXPECT_LT(evaluate(r.weights, va).pooled(), 1e-3);
  EXPECT_LT(r.history.back().val_rmse, r.history.front().val_rmse);
}

TEST(Train, DeterministicForFixedSeeds) {
  const auto tr = linear_set(300, 5);
  const auto va = linear_set(100, 6);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.train_stride = 2;
  cfg.init_seed = 11;
  cfg.shuffle_seed = 12;
  const ModelSpec s{Arch::GRU, 1, 4, 1, 3};
  const auto a = train(s, cfg, tr, va);
  const auto b = train(s, cfg, tr, va);
  EXPECT_EQ(a.weights.params, b.weights.params);
  ASSERT_EQ(a.history.size(), 3u);
  for (std::size_t e = 0; e < 3; ++e) {
    EXPECT_EQ(a.history[e].train_rmse, b.history[e].train_rmse);
    EXPECT_EQ(a.history[e].val_rmse, b.history[e].val_rmse);
  }
  cfg.shuffle_seed = 13;
  const auto c = train(s, cfg, tr, va);
  EXPECT_NE(a.weights.params, c.weights.params);
}

TEST(Train, BestSnapshotHasLowestValidationError) {
  const auto tr = linear_set(500, 7);
  const auto va = linear_set(200, 8);
  TrainConfig cfg;
  cfg.epochs = 8;
  cfg.train_stride = 1;
  cfg.eval_stride = 1;
  const auto r = train({Arch::MLP, 1, 5, 1, 3}, cfg, tr, va);
  double best = INFINITY;
  int best_epoch = 0;
  for (const auto& h : r.history) {
    if (h.val_rmse < best) {
      best = h.val_rmse;
      best_epoch = h.epoch;
    }
  }
  EXPECT_EQ(r.best_epoch, best_epoch);
  EXPECT_NEAR(evaluate(r.best, va).pooled(), best, 1e-12);
}

TEST(Train, WithoutValidationSetHistoryHasNaN) {
  const auto tr = linear_set(200, 9);
  TrainConfig cfg;
  cfg.epochs = 2;
  const auto r = train({Arch::MLP, 1, 5, 1, 3}, cfg, tr, {});
  ASSERT_EQ(r.history.size(), 2u);
  EXPECT_TRUE(std::isnan(r.history[0].val_rmse));
  EXPECT_EQ(r.best.params, r.weights.params);
}

TEST(Train, EmptyTrainingSetIsAnError) {
  prep::SequenceDataset empty;
  empty.dim = 1;
  try {
    train({Arch::MLP, 1, 5, 1, 3}, {}, empty, {});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("empty training set"), std::string::npos);
  }
}

TEST(Train, FeatureWidthMismatchIsAnError) {
  const auto tr = linear_set(50, 1);
  EXPECT_THROW(train({Arch::MLP, 1, 5, 2, 3}, {}, tr, {}), DataError);
}

TEST(Evaluate, StrideSubsamplesWindows) {
  const auto ds = linear_set(100, 3);
  const auto w = ModelWeights::zeros({Arch::MLP, 1, 2, 1, 3});
  EXPECT_EQ(evaluate(w, ds).n, 100u);
  EXPECT_EQ(evaluate(w, ds, 4).n, 25u);
  // A zero model's error is the label itself.
  ErrorStats direct;
  for (const auto& win : ds.windows) direct.add({}, ds.label(win));
  EXPECT_DOUBLE_EQ(evaluate(w, ds).pooled(), direct.pooled());
}
