#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "softtouch/experiment.hpp"
#include "softtouch/hash.hpp"

using namespace softtouch;
using namespace softtouch::exp;
using testing_fixtures::small_dataset;
using testing_fixtures::temp_dir;

namespace {

GridSpec tiny_grid() {
  GridSpec g;
  g.archs = {nn::Arch::MLP, nn::Arch::GRU};
  g.layer_values = {1};
  g.hidden_values = {3};
  g.train.epochs = 2;
  g.train.train_stride = 16;
  g.train.eval_stride = 16;
  g.window = 4;
  return g;
}

ResultRow make_row(nn::Arch a, int layers, int hidden, double pooled, std::size_t params) {
  ResultRow r;
  r.arch = a;
  r.layers = layers;
  r.hidden = hidden;
  r.rmse_fx = r.rmse_fy = r.rmse_fz = r.rmse_pooled = pooled;
  r.param_count = params;
  return r;
}

std::size_t count_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty();
  return n;
}

}  // namespace

TEST(GridSpec, DefaultHas36Cells) {
  const GridSpec g;
  EXPECT_EQ(g.cell_count(), 36u);
  const auto cells = enumerate_cells(g);
  ASSERT_EQ(cells.size(), 36u);
  EXPECT_EQ(cells.front().arch, nn::Arch::MLP);
  EXPECT_EQ(cells.back().arch, nn::Arch::GRU);
  EXPECT_EQ(cells.back().layers, 10);
  EXPECT_EQ(cells.back().hidden, 100);
}

TEST(GridSpec, YamlRoundTripAndErrors) {
  auto g = tiny_grid();
  g.seeds = {1, 2, 3};
  g.feature_sets = {prep::FeatureSet::T1, prep::FeatureSet::T7};
  const auto back = grid_from_yaml(grid_to_yaml(g));
  EXPECT_EQ(grid_to_yaml(back), grid_to_yaml(g));
  EXPECT_EQ(back.cell_count(), 2u * 2u * 3u);
  EXPECT_EQ(grid_from_yaml("grid:\n  archs: [gru]\n  layers: [2]\n").layer_values, std::vector<int>{2});
  EXPECT_THROW(grid_from_yaml("archs: [cnn]\n"), DataError);
  auto bad = g;
  bad.hidden_values = {0};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = g;
  bad.archs.clear();
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(CellKey, DependsOnCellSettingsAndData) {
  const auto g = tiny_grid();
  const Cell c{nn::Arch::GRU, 1, 3, prep::FeatureSet::T7, 0};
  const auto k = cell_key(c, g, "abc");
  EXPECT_EQ(k, cell_key(c, g, "abc"));
  EXPECT_NE(k, cell_key(c, g, "abd"));
  auto c2 = c;
  c2.seed = 1;
  EXPECT_NE(k, cell_key(c2, g, "abc"));
  auto g2 = g;
  g2.train.epochs = 3;
  EXPECT_NE(k, cell_key(c, g2, "abc"));
}

TEST(NormalizeRelative, MaxIsExactlyOne) {
  std::vector<ResultRow> rows{make_row(nn::Arch::MLP, 1, 10, 0.3, 10), make_row(nn::Arch::GRU, 1, 10, 0.6, 20),
                              make_row(nn::Arch::RNN, 1, 10, 0.15, 30)};
  normalize_relative(rows);
  EXPECT_EQ(rows[1].relative_rmse, 1.0);
  EXPECT_DOUBLE_EQ(rows[0].relative_rmse, 0.5);
  EXPECT_DOUBLE_EQ(rows[2].relative_rmse, 0.25);
}

TEST(NormalizeRelative, ScaleFreeAndOrderPreserving) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  std::vector<ResultRow> rows;
  for (int i = 0; i < 12; ++i) rows.push_back(make_row(nn::Arch::GRU, 1, 10 + i, u(rng), 100 + i));
  auto scaled = rows;
  for (auto& r : scaled) r.rmse_pooled *= 7.0;
  normalize_relative(rows);
  normalize_relative(scaled);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_NEAR(rows[i].relative_rmse, scaled[i].relative_rmse, 1e-15);
  EXPECT_EQ(best_row(rows).hidden, best_row(scaled).hidden);
}

TEST(BestRow, TieBreaks) {
  std::vector<ResultRow> rows{make_row(nn::Arch::RNN, 1, 10, 0.2, 500), make_row(nn::Arch::LSTM, 1, 10, 0.2, 300),
                              make_row(nn::Arch::GRU, 1, 10, 0.2, 300), make_row(nn::Arch::MLP, 1, 10, 0.4, 50)};
  EXPECT_EQ(best_row(rows).arch, nn::Arch::GRU);  // "gru" < "lstm" at equal params
  rows[1].param_count = 299;
  EXPECT_EQ(best_row(rows).arch, nn::Arch::LSTM);
  rows[0].rmse_pooled = 0.1;
  EXPECT_EQ(best_row(rows).arch, nn::Arch::RNN);
  const std::vector<ResultRow> empty;
  EXPECT_THROW(best_row(empty), std::invalid_argument);
}

TEST(ResultsCsv, RoundTripIsExact) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ResultRow> rows;
  for (int i = 0; i < 5; ++i) {
    auto r = make_row(nn::Arch::LSTM, 5, 50, u(rng), 1234);
    r.rmse_fx = u(rng);
    r.wall_time = u(rng) * 100;
    r.seed = static_cast<std::uint64_t>(i);
    r.n_samples = 777;
    r.object_group = ObjectGroup::Untrained;
    r.feature_set = prep::FeatureSet::T6;
    rows.push_back(r);
  }
  normalize_relative(rows);
  const auto dir = temp_dir("exp_csv");
  write_results_csv(dir / "r.csv", rows);
  EXPECT_EQ(count_lines(dir / "r.csv"), rows.size() + 1);
  const auto back = read_results_csv(dir / "r.csv");
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(back[i].same_result(rows[i]));
    EXPECT_EQ(back[i].wall_time, rows[i].wall_time);
  }
  const auto json_back = row_from_json(row_to_json(rows[2]));
  EXPECT_TRUE(json_back.same_result(rows[2]));
  std::filesystem::remove_all(dir);
}

TEST(RunGrid, TrainsEveryCellAndNormalizes) {
  const auto out = run_grid(tiny_grid(), small_dataset());
  ASSERT_EQ(out.rows.size(), 2u);
  EXPECT_EQ(out.trained, 2u);
  EXPECT_TRUE(out.failures.empty());
  double max_rel = 0.0;
  for (const auto& r : out.rows) {
    EXPECT_EQ(r.object_group, ObjectGroup::All);
    EXPECT_GT(r.n_samples, 0u);
    EXPECT_TRUE(std::isfinite(r.rmse_pooled));
    EXPECT_NEAR(r.rmse_pooled, std::sqrt((r.rmse_fx * r.rmse_fx + r.rmse_fy * r.rmse_fy + r.rmse_fz * r.rmse_fz) / 3),
                1e-12);
    max_rel = std::max(max_rel, r.relative_rmse);
  }
  EXPECT_EQ(max_rel, 1.0);
  EXPECT_EQ(out.rows[0].arch, nn::Arch::MLP);
  EXPECT_EQ(out.rows[0].param_count, (nn::ModelSpec{nn::Arch::MLP, 1, 3, 14, 3}).param_count());
}

TEST(RunGrid, SingleCellHasRelativeOne) {
  auto g = tiny_grid();
  g.archs = {nn::Arch::GRU};
  const auto out = run_grid(g, small_dataset());
  ASSERT_EQ(out.rows.size(), 1u);
  EXPECT_EQ(out.rows[0].relative_rmse, 1.0);
}

TEST(RunGrid, DeterministicAndParallelSafe) {
  const auto a = run_grid(tiny_grid(), small_dataset());
  GridOptions opt;
  opt.jobs = 2;
  const auto b = run_grid(tiny_grid(), small_dataset(), opt);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_TRUE(a.rows[i].same_result(b.rows[i]));
}

TEST(RunGrid, LedgerResumeSkipsFinishedCells) {
  const auto dir = temp_dir("exp_ledger");
  GridOptions opt;
  opt.ledger = dir / "ledger.jsonl";
  const auto first = run_grid(tiny_grid(), small_dataset(), opt);
  EXPECT_EQ(first.trained, 2u);
  EXPECT_EQ(count_lines(dir / "ledger.jsonl"), 2u);
  const auto second = run_grid(tiny_grid(), small_dataset(), opt);
  EXPECT_EQ(second.trained, 0u);
  EXPECT_EQ(second.cached, 2u);
  ASSERT_EQ(second.rows.size(), first.rows.size());
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    EXPECT_TRUE(second.rows[i].same_result(first.rows[i]));
    EXPECT_EQ(second.rows[i].wall_time, first.rows[i].wall_time);
  }
  EXPECT_EQ(count_lines(dir / "ledger.jsonl"), 2u);
  EXPECT_EQ(read_ledger(dir / "ledger.jsonl").size(), 2u);
  // A grown grid only trains the new cell.
  auto g = tiny_grid();
  g.archs.push_back(nn::Arch::RNN);
  const auto third = run_grid(g, small_dataset(), opt);
  EXPECT_EQ(third.trained, 1u);
  EXPECT_EQ(third.cached, 2u);
  std::filesystem::remove_all(dir);
}

TEST(RunGrid, FailingCellIsSkipped) {
  // Episodes shorter than the recurrent window leave the GRU cell without training data,
  // while the single-frame MLP cell still trains.
  auto cfg = testing_fixtures::small_sweep();
  cfg.schedule = {};
  cfg.schedule.precontact = 0.03;
  cfg.schedule.settle = 0.05;
  cfg.schedule.distance = 0.0;
  cfg.schedule.release = 0.03;
  cfg.schedule.release_ramp = 0.02;
  cfg.schedule.contact_ramp = 0.02;
  const auto data = sim::generate_dataset(cfg, 1);
  ASSERT_LT(data.front().size(), 20u);
  auto g = tiny_grid();
  g.window = 0;
  g.train.train_stride = 1;
  const auto out = run_grid(g, data);
  ASSERT_EQ(out.rows.size(), 1u);
  EXPECT_EQ(out.rows[0].arch, nn::Arch::MLP);
  ASSERT_EQ(out.failures.size(), 1u);
  EXPECT_NE(out.failures[0].find("gru"), std::string::npos);
}

TEST(RunGrid, MissingDatasetIsAnError) {
  auto g = tiny_grid();
  g.dataset = "/nonexistent/data";
  try {
    run_grid(g);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("dataset not found"), std::string::npos);
  }
}

TEST(RunGrid, NoValidationSplitIsAnError) {
  Dataset data = small_dataset();
  std::erase_if(data, [](const Episode& e) { return e.meta.repetition == 4; });
  EXPECT_THROW(run_grid(tiny_grid(), data), DataError);
}

TEST(AblateFeatures, OneRowPerFeatureSet) {
  nn::TrainConfig cfg;
  cfg.epochs = 1;
  cfg.train_stride = 32;
  const auto out = ablate_features({nn::Arch::MLP, 1, 3, 14, 3}, small_dataset(), {0}, cfg);
  ASSERT_EQ(out.rows.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(out.rows[i].feature_set, prep::kAllFeatureSets[i]);
    EXPECT_EQ(out.rows[i].arch, nn::Arch::MLP);
  }
  EXPECT_LT(out.rows[0].param_count, out.rows[6].param_count);
}

TEST(EvalByObject, GroupsAndPooling) {
  nn::TrainConfig cfg;
  cfg.epochs = 1;
  cfg.train_stride = 32;
  const auto fit = fit_model(small_dataset(), {nn::Arch::GRU, 1, 3, 14, 3}, prep::FeatureSet::T7, cfg, 4);
  const auto rows = eval_by_object(fit.model, small_dataset());
  // convex and square validation episodes, the held-out object, and the pooled row
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].object_group, ObjectGroup::Convex);
  EXPECT_EQ(rows[1].object_group, ObjectGroup::Square);
  EXPECT_EQ(rows[2].object_group, ObjectGroup::Untrained);
  EXPECT_EQ(rows[3].object_group, ObjectGroup::All);
  // Untrained covers all four held-out repetitions.
  EXPECT_EQ(rows[2].n_samples, 4 * (small_dataset().front().size() - 3));
  // The pooled row is the sample-weighted pool of the groups.
  double sse = 0.0;
  std::size_t n = 0;
  for (int i = 0; i < 3; ++i) {
    sse += rows[i].rmse_pooled * rows[i].rmse_pooled * 3.0 * static_cast<double>(rows[i].n_samples);
    n += rows[i].n_samples;
  }
  EXPECT_EQ(rows[3].n_samples, n);
  EXPECT_NEAR(rows[3].rmse_pooled, std::sqrt(sse / (3.0 * static_cast<double>(n))), 1e-9);

  Dataset no_holdout = small_dataset();
  std::erase_if(no_holdout, [](const Episode& e) { return e.meta.holdout; });
  try {
    eval_by_object(fit.model, no_holdout);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "no holdout object episodes");
  }
}

TEST(AssertEvaluationOnly, RejectsTrainingEpisodes) {
  const auto& data = small_dataset();
  std::vector<const Episode*> eps;
  for (const auto& ep : data) {
    if (ep.meta.is_validation()) eps.push_back(&ep);
  }
  EXPECT_NO_THROW(assert_evaluation_only(eps));
  eps.push_back(&data.front());
  EXPECT_THROW(assert_evaluation_only(eps), std::logic_error);
}

TEST(Report, WritesCsvAndSummary) {
  std::vector<ResultRow> rows{make_row(nn::Arch::MLP, 1, 10, 0.3, 10), make_row(nn::Arch::GRU, 1, 10, 0.1, 20)};
  normalize_relative(rows);
  const auto dir = temp_dir("exp_report");
  report(rows, dir);
  EXPECT_EQ(count_lines(dir / "results.csv"), 3u);
  std::ifstream in(dir / "summary.json");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("\"best\""), std::string::npos);
  EXPECT_NE(ss.str().find("normalization_anchor_rmse"), std::string::npos);
  std::filesystem::remove_all(dir);
}
