#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "softtouch/pipeline.hpp"

namespace softtouch::exp {

enum class ObjectGroup { Convex, Concave, Square, Untrained, All };
std::string_view to_string(ObjectGroup g);
ObjectGroup parse_object_group(std::string_view s);

struct GridSpec {
  std::vector<nn::Arch> archs{nn::Arch::MLP, nn::Arch::RNN, nn::Arch::LSTM, nn::Arch::GRU};
  std::vector<int> layer_values{1, 5, 10};
  std::vector<int> hidden_values{10, 50, 100};
  std::vector<prep::FeatureSet> feature_sets{prep::FeatureSet::T7};
  std::filesystem::path dataset;
  std::vector<std::uint64_t> seeds{0};
  nn::TrainConfig train;
  std::size_t window = 0;  // 0: default per architecture

  std::size_t cell_count() const;
  void validate() const;
};

GridSpec grid_from_yaml(const std::string& text);
GridSpec load_grid_config(const std::filesystem::path& file);
std::string grid_to_yaml(const GridSpec& g);

struct Cell {
  nn::Arch arch = nn::Arch::GRU;
  int layers = 1;
  int hidden = 10;
  prep::FeatureSet features = prep::FeatureSet::T7;
  std::uint64_t seed = 0;
};

/// Cartesian product in the order arch, layers, hidden, feature set, seed.
std::vector<Cell> enumerate_cells(const GridSpec& g);

/// Ledger key: SHA-256 of the cell, its training settings and the dataset fingerprint.
std::string cell_key(const Cell& c, const GridSpec& g, const std::string& dataset_fingerprint);

struct ResultRow {
  nn::Arch arch = nn::Arch::GRU;
  int layers = 1;
  int hidden = 10;
  prep::FeatureSet feature_set = prep::FeatureSet::T7;
  ObjectGroup object_group = ObjectGroup::All;
  double rmse_fx = 0.0;
  double rmse_fy = 0.0;
  double rmse_fz = 0.0;
  double rmse_pooled = 0.0;
  double relative_rmse = 1.0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // s
  std::size_t n_samples = 0;
  std::size_t param_count = 0;

  static ResultRow from_stats(const Cell& c, ObjectGroup g, const nn::ErrorStats& s, std::size_t params);
  /// Equal in everything except wall_time.
  bool same_result(const ResultRow& o) const;
};

/// relative_rmse = rmse_pooled / max(rmse_pooled) over the rows.
void normalize_relative(std::vector<ResultRow>& rows);

/// Lowest pooled RMSE; ties go to fewer parameters, then the lexicographically smaller arch name.
const ResultRow& best_row(const std::vector<ResultRow>& rows);

struct GridOptions {
  std::optional<std::filesystem::path> ledger;  // JSONL run ledger, appended per finished cell
  unsigned jobs = 1;
};

struct GridOutcome {
  std::vector<ResultRow> rows;  // cell order, failed cells omitted
  std::size_t trained = 0;
  std::size_t cached = 0;
  std::vector<std::string> failures;
};

/// Trains every cell on the training split and evaluates it on repetition-4 episodes.
/// A failing cell is logged and skipped.
GridOutcome run_grid(const GridSpec& g, const Dataset& data, const GridOptions& opt = {});
/// Loads g.dataset first; throws DataError when it is missing.
GridOutcome run_grid(const GridSpec& g, const GridOptions& opt = {});

/// One fixed model spec over all seven feature sets.
GridOutcome ablate_features(const nn::ModelSpec& spec, const Dataset& data, const std::vector<std::uint64_t>& seeds,
                            const nn::TrainConfig& cfg, const GridOptions& opt = {}, std::size_t window = 0);

/// Rows for the convex, concave and square validation episodes, the untrained (held-out) object,
/// and all of them pooled. Throws DataError when the dataset has no held-out episodes.
std::vector<ResultRow> eval_by_object(const TrainedModel& model, const Dataset& data, std::uint64_t seed = 0);

/// Throws std::logic_error if any episode belongs to the training split.
void assert_evaluation_only(std::span<const Episode* const> episodes);

const std::vector<std::string>& result_csv_columns();
void write_results_csv(const std::filesystem::path& file, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& file);
std::vector<ResultRow> read_ledger(const std::filesystem::path& file);

std::string row_to_json(const ResultRow& r);
ResultRow row_from_json(const std::string& text);

/// Writes results.csv and summary.json (best cell, per-axis table, normalization anchor) to out_dir.
void report(const std::vector<ResultRow>& rows, const std::filesystem::path& out_dir);

}  // namespace softtouch::exp
