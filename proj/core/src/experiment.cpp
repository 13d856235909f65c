#include "softtouch/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "json.hpp"
#include "softtouch/dataset_io.hpp"
#include "softtouch/finger_sim.hpp"
#include "softtouch/hash.hpp"
#include "softtouch/logging.hpp"

namespace softtouch::exp {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(ObjectGroup g) {
  switch (g) {
    case ObjectGroup::Convex: return "convex";
    case ObjectGroup::Concave: return "concave";
    case ObjectGroup::Square: return "square";
    case ObjectGroup::Untrained: return "untrained";
    case ObjectGroup::All: return "all";
  }
  return "unknown";
}

ObjectGroup parse_object_group(std::string_view s) {
  for (auto g : {ObjectGroup::Convex, ObjectGroup::Concave, ObjectGroup::Square, ObjectGroup::Untrained,
                 ObjectGroup::All}) {
    if (to_string(g) == s) return g;
  }
  throw DataError("unknown object group '" + std::string(s) + "'");
}

std::size_t GridSpec::cell_count() const {
  return archs.size() * layer_values.size() * hidden_values.size() * feature_sets.size() * seeds.size();
}

void GridSpec::validate() const {
  if (cell_count() == 0) throw std::invalid_argument("grid: every axis needs at least one value");
  for (int l : layer_values) {
    if (l < 1) throw std::invalid_argument("grid: layer values must be >= 1");
  }
  for (int h : hidden_values) {
    if (h < 1) throw std::invalid_argument("grid: hidden values must be >= 1");
  }
  train.validate();
}

GridSpec grid_from_yaml(const std::string& text) {
  GridSpec g;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw DataError(std::string("grid config: ") + e.what());
  }
  if (!root || root.IsNull()) return g;
  const YAML::Node n = root["grid"] ? root["grid"] : root;
  try {
    if (n["archs"]) {
      g.archs.clear();
      for (const auto& a : n["archs"]) g.archs.push_back(nn::parse_arch(a.as<std::string>()));
    }
    if (n["layers"]) g.layer_values = n["layers"].as<std::vector<int>>();
    if (n["hidden"]) g.hidden_values = n["hidden"].as<std::vector<int>>();
    if (n["feature_sets"]) {
      g.feature_sets.clear();
      for (const auto& f : n["feature_sets"]) g.feature_sets.push_back(prep::parse_feature_set(f.as<std::string>()));
    }
    if (n["dataset"]) g.dataset = n["dataset"].as<std::string>();
    if (n["seeds"]) g.seeds = n["seeds"].as<std::vector<std::uint64_t>>();
    if (n["window"]) g.window = n["window"].as<std::size_t>();
    if (const auto t = n["train"]) {
      if (t["batch_size"]) g.train.batch_size = t["batch_size"].as<std::size_t>();
      if (t["epochs"]) g.train.epochs = t["epochs"].as<int>();
      if (t["learning_rate"]) g.train.learning_rate = t["learning_rate"].as<double>();
      if (t["train_stride"]) g.train.train_stride = t["train_stride"].as<std::size_t>();
      if (t["eval_stride"]) g.train.eval_stride = t["eval_stride"].as<std::size_t>();
    }
  } catch (const YAML::Exception& e) {
    throw DataError(std::string("grid config: ") + e.what());
  }
  return g;
}

GridSpec load_grid_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("no such file: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return grid_from_yaml(ss.str());
}

std::string grid_to_yaml(const GridSpec& g) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "archs" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto a : g.archs) out << std::string(nn::to_string(a));
  out << YAML::EndSeq;
  out << YAML::Key << "layers" << YAML::Value << YAML::Flow << g.layer_values;
  out << YAML::Key << "hidden" << YAML::Value << YAML::Flow << g.hidden_values;
  out << YAML::Key << "feature_sets" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto f : g.feature_sets) out << std::string(prep::to_string(f));
  out << YAML::EndSeq;
  out << YAML::Key << "dataset" << YAML::Value << g.dataset.string();
  out << YAML::Key << "seeds" << YAML::Value << YAML::Flow << g.seeds;
  out << YAML::Key << "window" << YAML::Value << g.window;
  out << YAML::Key << "train" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "batch_size" << YAML::Value << g.train.batch_size;
  out << YAML::Key << "epochs" << YAML::Value << g.train.epochs;
  out << YAML::Key << "learning_rate" << YAML::Value << g.train.learning_rate;
  out << YAML::Key << "train_stride" << YAML::Value << g.train.train_stride;
  out << YAML::Key << "eval_stride" << YAML::Value << g.train.eval_stride;
  out << YAML::EndMap << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<Cell> enumerate_cells(const GridSpec& g) {
  std::vector<Cell> cells;
  cells.reserve(g.cell_count());
  for (auto a : g.archs) {
    for (int l : g.layer_values) {
      for (int h : g.hidden_values) {
        for (auto f : g.feature_sets) {
          for (auto s : g.seeds) cells.push_back({a, l, h, f, s});
        }
      }
    }
  }
  return cells;
}

namespace {

std::size_t window_for(const Cell& c, const GridSpec& g) {
  return g.window ? g.window : default_window(c.arch);
}

nn::ModelSpec spec_for(const Cell& c) {
  nn::ModelSpec s;
  s.arch = c.arch;
  s.layers = c.layers;
  s.hidden = c.hidden;
  s.in_dim = static_cast<int>(prep::feature_channels(c.features).size());
  return s;
}

nn::TrainConfig train_config_for(const Cell& c, const GridSpec& g) {
  nn::TrainConfig t = g.train;
  t.init_seed = sim::derive_seed(c.seed, 1);
  t.shuffle_seed = sim::derive_seed(c.seed, 2);
  return t;
}

void append_double(std::string& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, r.ptr);
}

}  // namespace

std::string cell_key(const Cell& c, const GridSpec& g, const std::string& dataset_fingerprint) {
  std::ostringstream s;
  s << "arch=" << nn::to_string(c.arch) << ";layers=" << c.layers << ";hidden=" << c.hidden
    << ";features=" << prep::to_string(c.features) << ";seed=" << c.seed << ";window=" << window_for(c, g)
    << ";batch=" << g.train.batch_size << ";epochs=" << g.train.epochs << ";lr=";
  std::string lr;
  append_double(lr, g.train.learning_rate);
  s << lr << ";train_stride=" << g.train.train_stride << ";layout=" << nn::kLayoutVersion
    << ";data=" << dataset_fingerprint;
  return sha256_hex(s.str());
}

ResultRow ResultRow::from_stats(const Cell& c, ObjectGroup g, const nn::ErrorStats& s, std::size_t params) {
  ResultRow r;
  r.arch = c.arch;
  r.layers = c.layers;
  r.hidden = c.hidden;
  r.feature_set = c.features;
  r.object_group = g;
  r.rmse_fx = s.rmse(0);
  r.rmse_fy = s.rmse(1);
  r.rmse_fz = s.rmse(2);
  r.rmse_pooled = s.pooled();
  r.seed = c.seed;
  r.n_samples = s.n;
  r.param_count = params;
  return r;
}

bool ResultRow::same_result(const ResultRow& o) const {
  return arch == o.arch && layers == o.layers && hidden == o.hidden && feature_set == o.feature_set &&
         object_group == o.object_group && rmse_fx == o.rmse_fx && rmse_fy == o.rmse_fy &&
         rmse_fz == o.rmse_fz && rmse_pooled == o.rmse_pooled && relative_rmse == o.relative_rmse &&
         seed == o.seed && n_samples == o.n_samples && param_count == o.param_count;
}

void normalize_relative(std::vector<ResultRow>& rows) {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.rmse_pooled);
  for (auto& r : rows) r.relative_rmse = worst > 0.0 ? r.rmse_pooled / worst : 1.0;
}

const ResultRow& best_row(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("best_row: no rows");
  auto better = [](const ResultRow& a, const ResultRow& b) {
    if (a.rmse_pooled != b.rmse_pooled) return a.rmse_pooled < b.rmse_pooled;
    if (a.param_count != b.param_count) return a.param_count < b.param_count;
    return nn::to_string(a.arch) < nn::to_string(b.arch);
  };
  return *std::min_element(rows.begin(), rows.end(), better);
}

std::string row_to_json(const ResultRow& r) {
  json j;
  j["arch"] = std::string(nn::to_string(r.arch));
  j["layers"] = r.layers;
  j["hidden"] = r.hidden;
  j["feature_set"] = std::string(prep::to_string(r.feature_set));
  j["object_group"] = std::string(to_string(r.object_group));
  j["rmse_fx"] = r.rmse_fx;
  j["rmse_fy"] = r.rmse_fy;
  j["rmse_fz"] = r.rmse_fz;
  j["rmse_pooled"] = r.rmse_pooled;
  j["relative_rmse"] = r.relative_rmse;
  j["seed"] = r.seed;
  j["wall_time"] = r.wall_time;
  j["n_samples"] = r.n_samples;
  j["param_count"] = r.param_count;
  return j.dump();
}

namespace {

ResultRow row_from(const json& j) {
  ResultRow r;
  r.arch = nn::parse_arch(j.at("arch").get<std::string>());
  r.layers = j.at("layers").get<int>();
  r.hidden = j.at("hidden").get<int>();
  r.feature_set = prep::parse_feature_set(j.at("feature_set").get<std::string>());
  r.object_group = parse_object_group(j.at("object_group").get<std::string>());
  r.rmse_fx = j.at("rmse_fx").get<double>();
  r.rmse_fy = j.at("rmse_fy").get<double>();
  r.rmse_fz = j.at("rmse_fz").get<double>();
  r.rmse_pooled = j.at("rmse_pooled").get<double>();
  r.relative_rmse = j.at("relative_rmse").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.wall_time = j.at("wall_time").get<double>();
  r.n_samples = j.at("n_samples").get<std::size_t>();
  r.param_count = j.at("param_count").get<std::size_t>();
  return r;
}

// Entries in file order; a key written twice keeps its first position and its latest row.
std::vector<std::pair<std::string, ResultRow>> load_ledger_entries(const fs::path& file) {
  std::vector<std::pair<std::string, ResultRow>> out;
  std::map<std::string, std::size_t> index;
  std::ifstream in(file);
  if (!in) return out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      auto key = j.at("key").get<std::string>();
      auto row = row_from(j.at("row"));
      if (auto it = index.find(key); it != index.end()) {
        out[it->second].second = row;
      } else {
        index.emplace(key, out.size());
        out.emplace_back(std::move(key), row);
      }
    } catch (const std::exception& e) {
      // A torn final line from an interrupted run is skipped; that cell simply reruns.
      log::warn(file.string() + ":" + std::to_string(lineno) + ": unreadable ledger entry skipped");
    }
  }
  return out;
}

std::map<std::string, ResultRow> load_ledger_map(const fs::path& file) {
  std::map<std::string, ResultRow> out;
  for (auto& [key, row] : load_ledger_entries(file)) out[key] = row;
  return out;
}

}  // namespace

ResultRow row_from_json(const std::string& text) {
  try {
    return row_from(json::parse(text));
  } catch (const json::exception& e) {
    throw DataError(std::string("result row: ") + e.what());
  }
}

std::vector<ResultRow> read_ledger(const fs::path& file) {
  if (!fs::exists(file)) throw DataError("no such file: " + file.string());
  std::vector<ResultRow> rows;
  for (auto& [key, row] : load_ledger_entries(file)) rows.push_back(row);
  return rows;
}

void assert_evaluation_only(std::span<const Episode* const> episodes) {
  for (const Episode* ep : episodes) {
    if (!(ep->meta.repetition == 4 || ep->meta.holdout)) {
      throw std::logic_error("leakage: evaluation episode with repetition " + std::to_string(ep->meta.repetition) +
                             " is part of the training split");
    }
  }
}

GridOutcome run_grid(const GridSpec& g, const Dataset& data, const GridOptions& opt) {
  g.validate();
  const auto cells = enumerate_cells(g);
  {
    std::ostringstream msg;
    msg << "grid: " << cells.size() << " cells (" << g.archs.size() << " archs x " << g.layer_values.size()
        << " layer values x " << g.hidden_values.size() << " hidden values x " << g.feature_sets.size()
        << " feature sets x " << g.seeds.size() << " seeds)";
    log::info(msg.str());
  }
  const std::string fingerprint = dataset_fingerprint(data);
  const auto val_eps = select(data, [](const ConditionMeta& m) { return m.is_validation(); });
  if (val_eps.empty()) throw DataError("no validation split");
  assert_evaluation_only(val_eps);

  std::map<std::string, ResultRow> cache;
  if (opt.ledger) cache = load_ledger_map(*opt.ledger);

  std::vector<std::optional<ResultRow>> slots(cells.size());
  std::vector<std::string> keys(cells.size());
  GridOutcome outcome;
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    keys[i] = cell_key(cells[i], g, fingerprint);
    if (auto it = cache.find(keys[i]); it != cache.end()) {
      slots[i] = it->second;
      ++outcome.cached;
    } else {
      todo.push_back(i);
    }
  }

  std::mutex ledger_mutex;
  std::ofstream ledger_out;
  if (opt.ledger && !todo.empty()) {
    if (opt.ledger->has_parent_path()) fs::create_directories(opt.ledger->parent_path());
    ledger_out.open(*opt.ledger, std::ios::app);
    if (!ledger_out) throw DataError("cannot open ledger " + opt.ledger->string());
  }
  std::vector<std::string> failures(cells.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < todo.size(); k = next++) {
      const std::size_t i = todo[k];
      const Cell& c = cells[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const auto fit = fit_model(data, spec_for(c), c.features, train_config_for(c, g), window_for(c, g));
        const auto stats = evaluate_episodes(fit.model, val_eps);
        ResultRow row = ResultRow::from_stats(c, ObjectGroup::All, stats, fit.model.weights.params.size());
        row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slots[i] = row;
        if (ledger_out.is_open()) {
          const std::lock_guard lock(ledger_mutex);
          ledger_out << "{\"key\":\"" << keys[i] << "\",\"row\":" << row_to_json(row) << "}\n";
          ledger_out.flush();
        }
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << nn::to_string(c.arch) << "(" << c.layers << "," << c.hidden << ") " << prep::to_string(c.features)
            << " seed " << c.seed << ": " << e.what();
        failures[i] = msg.str();
        log::error("grid cell failed: " + failures[i]);
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(todo.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  outcome.trained = todo.size();

  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (slots[i]) outcome.rows.push_back(*slots[i]);
    if (!failures[i].empty()) outcome.failures.push_back(failures[i]);
  }
  outcome.trained -= outcome.failures.size();
  normalize_relative(outcome.rows);
  return outcome;
}

GridOutcome run_grid(const GridSpec& g, const GridOptions& opt) {
  if (g.dataset.empty() || !fs::exists(g.dataset)) throw DataError("dataset not found: " + g.dataset.string());
  const Dataset data = io::read_dataset(g.dataset);
  if (data.empty()) throw DataError("dataset has no episodes: " + g.dataset.string());
  return run_grid(g, data, opt);
}

GridOutcome ablate_features(const nn::ModelSpec& spec, const Dataset& data, const std::vector<std::uint64_t>& seeds,
                            const nn::TrainConfig& cfg, const GridOptions& opt, std::size_t window) {
  GridSpec g;
  g.archs = {spec.arch};
  g.layer_values = {spec.layers};
  g.hidden_values = {spec.hidden};
  g.feature_sets.assign(std::begin(prep::kAllFeatureSets), std::end(prep::kAllFeatureSets));
  g.seeds = seeds;
  g.train = cfg;
  g.window = window;
  return run_grid(g, data, opt);
}

std::vector<ResultRow> eval_by_object(const TrainedModel& model, const Dataset& data, std::uint64_t seed) {
  const auto holdout = select(data, [](const ConditionMeta& m) { return m.holdout; });
  if (holdout.empty()) throw DataError("no holdout object episodes");
  Cell c{model.weights.spec.arch, model.weights.spec.layers, model.weights.spec.hidden, model.features, seed};
  const std::size_t params = model.weights.params.size();

  std::vector<ResultRow> rows;
  nn::ErrorStats all;
  auto add_group = [&](ObjectGroup g, const std::vector<const Episode*>& eps) {
    if (eps.empty()) return;
    assert_evaluation_only(eps);
    const auto stats = evaluate_episodes(model, eps);
    if (stats.n == 0) return;
    all += stats;
    rows.push_back(ResultRow::from_stats(c, g, stats, params));
  };
  for (auto [group, shape] : {std::pair{ObjectGroup::Convex, ObjectShape::Convex},
                              std::pair{ObjectGroup::Concave, ObjectShape::Concave},
                              std::pair{ObjectGroup::Square, ObjectShape::Square}}) {
    std::vector<const Episode*> eps;
    for (const auto& ep : data) {
      if (ep.meta.is_validation() && ep.meta.object_shape == shape) eps.push_back(&ep);
    }
    add_group(group, eps);
  }
  add_group(ObjectGroup::Untrained, holdout);
  rows.push_back(ResultRow::from_stats(c, ObjectGroup::All, all, params));
  normalize_relative(rows);
  return rows;
}

const std::vector<std::string>& result_csv_columns() {
  static const std::vector<std::string> cols = {
      "arch",        "layers",      "hidden",        "feature_set", "object_group",
      "rmse_fx",     "rmse_fy",     "rmse_fz",       "rmse_pooled", "relative_rmse",
      "seed",        "wall_time",   "n_samples",     "param_count"};
  return cols;
}

void write_results_csv(const fs::path& file, const std::vector<ResultRow>& rows) {
  std::string out;
  const auto& cols = result_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const auto& r : rows) {
    out += nn::to_string(r.arch);
    out += ',' + std::to_string(r.layers) + ',' + std::to_string(r.hidden) + ',';
    out += prep::to_string(r.feature_set);
    out += ',';
    out += to_string(r.object_group);
    for (double v : {r.rmse_fx, r.rmse_fy, r.rmse_fz, r.rmse_pooled, r.relative_rmse}) {
      out += ',';
      append_double(out, v);
    }
    out += ',' + std::to_string(r.seed) + ',';
    append_double(out, r.wall_time);
    out += ',' + std::to_string(r.n_samples) + ',' + std::to_string(r.param_count) + '\n';
  }
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream f(file, std::ios::binary);
  if (!f) throw DataError("cannot write " + file.string());
  f << out;
  if (!f) throw DataError("write failed: " + file.string());
}

std::vector<ResultRow> read_results_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("no such file: " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(file.string() + ": empty file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header != result_csv_columns()) throw DataError(file.string() + ": unexpected results header");
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != header.size()) {
      throw DataError(file.string() + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(header.size()) + " fields");
    }
    try {
      ResultRow r;
      r.arch = nn::parse_arch(f[0]);
      r.layers = std::stoi(f[1]);
      r.hidden = std::stoi(f[2]);
      r.feature_set = prep::parse_feature_set(f[3]);
      r.object_group = parse_object_group(f[4]);
      r.rmse_fx = std::stod(f[5]);
      r.rmse_fy = std::stod(f[6]);
      r.rmse_fz = std::stod(f[7]);
      r.rmse_pooled = std::stod(f[8]);
      r.relative_rmse = std::stod(f[9]);
      r.seed = std::stoull(f[10]);
      r.wall_time = std::stod(f[11]);
      r.n_samples = std::stoull(f[12]);
      r.param_count = std::stoull(f[13]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw DataError(file.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

void report(const std::vector<ResultRow>& rows, const fs::path& out_dir) {
  if (rows.empty()) throw DataError("report: no result rows");
  fs::create_directories(out_dir);
  std::vector<ResultRow> normalized = rows;
  normalize_relative(normalized);
  write_results_csv(out_dir / "results.csv", normalized);

  const auto& best = best_row(normalized);
  json summary;
  summary["rows"] = normalized.size();
  summary["best"] = json::parse(row_to_json(best));
  double anchor = 0.0;
  for (const auto& r : normalized) anchor = std::max(anchor, r.rmse_pooled);
  summary["normalization_anchor_rmse"] = anchor;
  json table = json::array();
  for (const auto& r : normalized) {
    table.push_back({{"arch", std::string(nn::to_string(r.arch))},
                     {"layers", r.layers},
                     {"hidden", r.hidden},
                     {"feature_set", std::string(prep::to_string(r.feature_set))},
                     {"object_group", std::string(to_string(r.object_group))},
                     {"seed", r.seed},
                     {"rmse", {r.rmse_fx, r.rmse_fy, r.rmse_fz}},
                     {"rmse_pooled", r.rmse_pooled},
                     {"relative_rmse", r.relative_rmse}});
  }
  summary["per_axis"] = table;
  std::ofstream f(out_dir / "summary.json", std::ios::binary);
  if (!f) throw DataError("cannot write " + (out_dir / "summary.json").string());
  f << summary.dump(2) << "\n";
  if (!f) throw DataError("write failed: " + (out_dir / "summary.json").string());
}

}  // namespace softtouch::exp
