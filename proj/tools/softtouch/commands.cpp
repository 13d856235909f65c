#include "commands.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "softtouch/contact.hpp"
#include "softtouch/dataset_io.hpp"
#include "softtouch/experiment.hpp"
#include "softtouch/finger_sim.hpp"
#include "softtouch/logging.hpp"
#include "softtouch/pipeline.hpp"
#include "softtouch/scenarios.hpp"

namespace softtouch::cli {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("no such file: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write " + file.string());
  out << text;
  if (!out) throw DataError("write failed: " + file.string());
}

YAML::Node load_yaml(const fs::path& file) {
  const std::string text = read_text(file);
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw DataError(file.string() + ": " + e.what());
  }
}

std::string emit(const YAML::Node& node) {
  YAML::Emitter out;
  out << node;
  return std::string(out.c_str()) + "\n";
}

/// The resolved configuration goes to <out>/resolved_config before any work starts.
void echo_resolved(const fs::path& out_dir, const YAML::Node& node) {
  fs::create_directories(out_dir);
  write_text(out_dir / "resolved_config", emit(node));
}

void append_double(std::string& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, r.ptr);
}

template <typename T>
void override_if(const CLI::Option* opt, const T& value, T& target) {
  if (opt && opt->count() > 0) target = value;
}

// Training settings shared by train, grid and ablate.
struct TrainOptions {
  std::string arch = "gru";
  int layers = 1;
  int hidden = 10;
  std::string features = "t7";
  int epochs = 50;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  std::size_t train_stride = nn::TrainConfig{}.train_stride;
  std::size_t eval_stride = nn::TrainConfig{}.eval_stride;
  std::size_t window = 0;
  std::uint64_t seed = 0;

  std::vector<CLI::Option*> opts;  // arch, layers, hidden, features, epochs, batch, lr, train_stride, eval_stride, window, seed

  void add(CLI::App* sub, bool model_flags) {
    opts.assign(11, nullptr);
    if (model_flags) {
      opts[0] = sub->add_option("--arch", arch, "mlp, rnn, lstm or gru")->capture_default_str();
      opts[1] = sub->add_option("--layers", layers, "Stacked layers")->capture_default_str();
      opts[2] = sub->add_option("--hidden", hidden, "Hidden units per layer")->capture_default_str();
      opts[3] = sub->add_option("--features", features, "Feature set t1..t7")->capture_default_str();
    }
    opts[4] = sub->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
    opts[5] = sub->add_option("--batch-size", batch_size, "Mini-batch size")->capture_default_str();
    opts[6] = sub->add_option("--lr", lr, "ADAM learning rate")->capture_default_str();
    opts[7] = sub->add_option("--train-stride", train_stride,
                              "Visit every n-th training window per epoch, rotating the phase each epoch")
                  ->capture_default_str();
    opts[8] = sub->add_option("--eval-stride", eval_stride, "Validation subsampling for the per-epoch history")
                  ->capture_default_str();
    opts[9] = sub->add_option("--window", window, "Window length in frames (0: 20 for recurrent models, 1 for mlp)")
                  ->capture_default_str();
    opts[10] = sub->add_option("--seed", seed, "Seed for initialization and shuffling")->capture_default_str();
  }

  /// File values first, then any flag given on the command line.
  void resolve(const YAML::Node& file) {
    TrainOptions cli = *this;
    if (file) {
      auto get = [&](const char* key, auto& dst) {
        if (file[key]) dst = file[key].as<std::decay_t<decltype(dst)>>();
      };
      get("arch", arch);
      get("layers", layers);
      get("hidden", hidden);
      get("features", features);
      get("epochs", epochs);
      get("batch_size", batch_size);
      get("learning_rate", lr);
      get("train_stride", train_stride);
      get("eval_stride", eval_stride);
      get("window", window);
      get("seed", seed);
    }
    override_if(opts[0], cli.arch, arch);
    override_if(opts[1], cli.layers, layers);
    override_if(opts[2], cli.hidden, hidden);
    override_if(opts[3], cli.features, features);
    override_if(opts[4], cli.epochs, epochs);
    override_if(opts[5], cli.batch_size, batch_size);
    override_if(opts[6], cli.lr, lr);
    override_if(opts[7], cli.train_stride, train_stride);
    override_if(opts[8], cli.eval_stride, eval_stride);
    override_if(opts[9], cli.window, window);
    override_if(opts[10], cli.seed, seed);
  }

  nn::TrainConfig train_config() const {
    nn::TrainConfig c;
    c.epochs = epochs;
    c.batch_size = batch_size;
    c.learning_rate = lr;
    c.train_stride = train_stride;
    c.eval_stride = eval_stride;
    c.init_seed = sim::derive_seed(seed, 1);
    c.shuffle_seed = sim::derive_seed(seed, 2);
    c.validate();
    return c;
  }

  nn::ModelSpec spec() const {
    nn::ModelSpec s;
    s.arch = nn::parse_arch(arch);
    s.layers = layers;
    s.hidden = hidden;
    s.in_dim = static_cast<int>(prep::feature_channels(prep::parse_feature_set(features)).size());
    s.validate();
    return s;
  }

  YAML::Node to_yaml(bool model_fields) const {
    YAML::Node n;
    if (model_fields) {
      n["arch"] = arch;
      n["layers"] = layers;
      n["hidden"] = hidden;
      n["features"] = features;
    }
    n["epochs"] = epochs;
    n["batch_size"] = batch_size;
    n["learning_rate"] = lr;
    n["train_stride"] = train_stride;
    n["eval_stride"] = eval_stride;
    n["window"] = window;
    n["seed"] = seed;
    return n;
  }
};

contact::ContactStateConfig load_contact_config(const std::string& file) {
  contact::ContactStateConfig c;
  if (file.empty()) return c;
  const YAML::Node root = load_yaml(file);
  const YAML::Node n = root["contact"] ? root["contact"] : root;
  try {
    if (n["coulomb_mu"]) c = contact::ContactStateConfig::for_coulomb(n["coulomb_mu"].as<double>());
    if (n["mu_threshold"]) c.mu_threshold = n["mu_threshold"].as<double>();
    if (n["contact_eps"]) c.contact_eps = n["contact_eps"].as<double>();
    if (n["ratio_hysteresis"]) c.ratio_hysteresis = n["ratio_hysteresis"].as<double>();
    if (n["min_dwell"]) c.min_dwell = n["min_dwell"].as<int>();
  } catch (const YAML::Exception& e) {
    throw DataError(file + ": " + e.what());
  }
  c.validate();
  return c;
}

YAML::Node contact_to_yaml(const contact::ContactStateConfig& c) {
  YAML::Node n;
  n["mu_threshold"] = c.mu_threshold;
  n["contact_eps"] = c.contact_eps;
  n["ratio_hysteresis"] = c.ratio_hysteresis;
  n["min_dwell"] = c.min_dwell;
  return n;
}

std::string history_csv(const nn::TrainResult& r) {
  std::string out = "epoch,train_rmse,val_rmse\n";
  for (const auto& e : r.history) {
    out += std::to_string(e.epoch) + ",";
    append_double(out, e.train_rmse);
    out += ",";
    append_double(out, e.val_rmse);
    out += "\n";
  }
  return out;
}

void print_rows(const std::vector<exp::ResultRow>& rows) {
  std::cout << "arch,layers,hidden,feature_set,object_group,rmse_fx,rmse_fy,rmse_fz,rmse_pooled,relative_rmse\n";
  for (const auto& r : rows) {
    std::cout << nn::to_string(r.arch) << "," << r.layers << "," << r.hidden << "," << prep::to_string(r.feature_set)
              << "," << exp::to_string(r.object_group) << "," << r.rmse_fx << "," << r.rmse_fy << "," << r.rmse_fz
              << "," << r.rmse_pooled << "," << r.relative_rmse << "\n";
  }
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

void register_simulate(CLI::App& app) {
  struct Opts {
    std::string config, out;
    std::uint64_t seed = 0;
    bool no_noise = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("simulate", "Generate a simulated dataset from a sweep config");
  sub->add_option("--config", o->config, "Sweep config (YAML); built-in default sweep when omitted");
  sub->add_option("--out", o->out, "Output dataset directory")->required();
  sub->add_option("--seed", o->seed, "Master seed")->capture_default_str();
  sub->add_flag("--no-noise", o->no_noise, "Disable sensor artifacts and label noise");
  sub->callback([o] {
    sim::SweepConfig cfg = o->config.empty() ? sim::SweepConfig::defaults() : sim::load_sweep_config(o->config);
    if (o->no_noise) cfg.noise = false;
    cfg.validate();
    YAML::Node resolved;
    resolved["command"] = "simulate";
    resolved["seed"] = o->seed;
    resolved["sweep"] = YAML::Load(sim::sweep_to_yaml(cfg));
    echo_resolved(o->out, resolved);
    const Dataset data = sim::generate_dataset(cfg, o->seed);
    io::write_dataset(o->out, data);
    log::info("wrote " + std::to_string(data.size()) + " episodes to " + o->out);
    std::cout << data.size() << " episodes written to " << o->out << "\n";
  });
}

void register_validate(CLI::App& app) {
  auto dataset = std::make_shared<std::string>();
  auto* sub = app.add_subcommand("validate", "Check a dataset's schema, timestamps, splits and holdout episodes");
  sub->add_option("--dataset,dataset", *dataset, "Dataset directory")->required();
  sub->callback([dataset] {
    const auto report = io::validate_dataset(*dataset);
    std::cout << report.summary() << "\n";
    if (!report.ok()) {
      for (const auto& e : report.errors) std::cerr << "  " << e << "\n";
      throw DataError("dataset validation failed with " + std::to_string(report.errors.size()) + " error(s)");
    }
  });
}

void register_train(CLI::App& app) {
  struct Opts {
    std::string dataset, out, config;
    TrainOptions train;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("train", "Train one force regressor on repetitions 1-3");
  sub->add_option("--dataset", o->dataset, "Dataset directory")->required();
  sub->add_option("--out", o->out, "Output directory for weights.json, best_weights.json and history.csv")
      ->required();
  sub->add_option("--config", o->config, "YAML file with a train: section; flags override it");
  o->train.add(sub, true);
  sub->callback([o] {
    YAML::Node file;
    if (!o->config.empty()) {
      const YAML::Node root = load_yaml(o->config);
      file = root["train"] ? root["train"] : root;
    }
    o->train.resolve(file);
    const auto spec = o->train.spec();
    const auto cfg = o->train.train_config();
    const auto fs_tag = prep::parse_feature_set(o->train.features);

    YAML::Node resolved;
    resolved["command"] = "train";
    resolved["dataset"] = o->dataset;
    resolved["train"] = o->train.to_yaml(true);
    echo_resolved(o->out, resolved);

    const Dataset data = io::read_dataset(o->dataset);
    const auto fit = fit_model(data, spec, fs_tag, cfg, o->train.window);
    const fs::path out(o->out);
    fit.model.save(out / "weights.json");
    TrainedModel best = fit.model;
    best.weights = fit.training.best;
    best.save(out / "best_weights.json");
    write_text(out / "history.csv", history_csv(fit.training));
    const auto& last = fit.training.history.back();
    std::cout << "trained " << nn::to_string(spec.arch) << "(" << spec.layers << "," << spec.hidden << ") "
              << prep::to_string(fs_tag) << ": final train RMSE " << last.train_rmse << " N, val RMSE "
              << last.val_rmse << " N (best epoch " << fit.training.best_epoch << ")\n";
  });
}

void register_grid(CLI::App& app) {
  struct Opts {
    std::string config, dataset, out;
    unsigned jobs = default_jobs();
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("grid", "Run the architecture x layers x hidden x feature-set grid");
  sub->add_option("--config", o->config, "Grid config (YAML)")->required();
  auto* ds = sub->add_option("--dataset", o->dataset, "Dataset directory (overrides the config)");
  sub->add_option("--out", o->out, "Output directory (ledger.jsonl, results.csv, summary.json)")->required();
  sub->add_option("--jobs", o->jobs, "Parallel training workers (default: logical cores)");
  sub->callback([o, ds] {
    exp::GridSpec g = exp::load_grid_config(o->config);
    if (ds->count()) g.dataset = o->dataset;
    g.validate();
    YAML::Node resolved = YAML::Load(exp::grid_to_yaml(g));
    resolved["command"] = "grid";
    echo_resolved(o->out, resolved);
    const fs::path out(o->out);
    exp::GridOptions opt;
    opt.ledger = out / "ledger.jsonl";
    opt.jobs = o->jobs;
    const auto outcome = exp::run_grid(g, opt);
    if (outcome.rows.empty()) throw std::runtime_error("every grid cell failed");
    exp::report(outcome.rows, out);
    std::cout << outcome.rows.size() << " rows (" << outcome.trained << " trained, " << outcome.cached
              << " from ledger, " << outcome.failures.size() << " failed)\n";
    print_rows(outcome.rows);
  });
}

void register_ablate(CLI::App& app) {
  struct Opts {
    std::string weights, spec, dataset, out;
    std::vector<std::uint64_t> seeds;
    TrainOptions train;
    unsigned jobs = default_jobs();
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("ablate", "Retrain one model spec on each of the seven feature sets");
  auto* w = sub->add_option("--weights", o->weights, "Take the model spec from a weights file");
  auto* s = sub->add_option("--spec", o->spec, "Model spec as arch:layers:hidden, e.g. gru:1:10");
  w->excludes(s);
  sub->add_option("--dataset", o->dataset, "Dataset directory")->required();
  sub->add_option("--out", o->out, "Output directory")->required();
  sub->add_option("--seeds", o->seeds, "Seeds to repeat the ablation with (default: --seed)");
  sub->add_option("--jobs", o->jobs, "Parallel training workers (default: logical cores)");
  o->train.add(sub, false);
  sub->callback([o, w, s] {
    if (!w->count() && !s->count()) throw CLI::RequiredError("--weights or --spec");
    o->train.resolve({});
    nn::ModelSpec spec;
    std::size_t window = o->train.window;
    if (w->count()) {
      const auto model = TrainedModel::load(o->weights);
      spec = model.weights.spec;
      if (!window) window = model.window;
    } else {
      std::stringstream ss(o->spec);
      std::string arch, layers, hidden;
      if (!std::getline(ss, arch, ':') || !std::getline(ss, layers, ':') || !std::getline(ss, hidden)) {
        throw CLI::ValidationError("--spec", "expected arch:layers:hidden, got '" + o->spec + "'");
      }
      spec.arch = nn::parse_arch(arch);
      try {
        spec.layers = std::stoi(layers);
        spec.hidden = std::stoi(hidden);
      } catch (const std::logic_error&) {
        throw CLI::ValidationError("--spec", "layers and hidden must be integers");
      }
    }
    if (o->seeds.empty()) o->seeds = {o->train.seed};

    YAML::Node resolved;
    resolved["command"] = "ablate";
    resolved["dataset"] = o->dataset;
    resolved["arch"] = std::string(nn::to_string(spec.arch));
    resolved["layers"] = spec.layers;
    resolved["hidden"] = spec.hidden;
    resolved["seeds"] = o->seeds;
    resolved["train"] = o->train.to_yaml(false);
    resolved["train"]["window"] = window;
    echo_resolved(o->out, resolved);

    const Dataset data = io::read_dataset(o->dataset);
    const fs::path out(o->out);
    exp::GridOptions opt;
    opt.ledger = out / "ledger.jsonl";
    opt.jobs = o->jobs;
    const auto outcome = exp::ablate_features(spec, data, o->seeds, o->train.train_config(), opt, window);
    if (outcome.rows.empty()) throw std::runtime_error("every ablation cell failed");
    exp::report(outcome.rows, out);
    print_rows(outcome.rows);
  });
}

void register_eval(CLI::App& app) {
  struct Opts {
    std::string weights, dataset, out;
    bool by_object = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("eval", "Evaluate trained weights on validation and held-out episodes");
  sub->add_option("--weights", o->weights, "Weights file written by train")->required();
  sub->add_option("--dataset", o->dataset, "Dataset directory")->required();
  sub->add_flag("--by-object", o->by_object, "One row per object group, including the untrained object");
  sub->add_option("--out", o->out, "Also write results.csv and summary.json here");
  sub->callback([o] {
    const auto model = TrainedModel::load(o->weights);
    if (!o->out.empty()) {
      YAML::Node resolved;
      resolved["command"] = "eval";
      resolved["weights"] = o->weights;
      resolved["dataset"] = o->dataset;
      resolved["by_object"] = o->by_object;
      echo_resolved(o->out, resolved);
    }
    const Dataset data = io::read_dataset(o->dataset);
    std::vector<exp::ResultRow> rows;
    if (o->by_object) {
      rows = exp::eval_by_object(model, data);
    } else {
      const auto val = select(data, [](const ConditionMeta& m) { return m.is_validation(); });
      if (val.empty()) throw DataError("no validation split");
      exp::assert_evaluation_only(val);
      exp::Cell c{model.weights.spec.arch, model.weights.spec.layers, model.weights.spec.hidden, model.features, 0};
      rows.push_back(exp::ResultRow::from_stats(c, exp::ObjectGroup::All, evaluate_episodes(model, val),
                                                model.weights.params.size()));
    }
    if (!o->out.empty()) exp::report(rows, o->out);
    print_rows(rows);
  });
}

void register_detect(CLI::App& app) {
  struct Opts {
    std::string weights, input, config, out;
    bool ground_truth = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("detect", "Classify contact states and events from a frames CSV");
  auto* w = sub->add_option("--weights", o->weights, "Weights file; forces are estimated from the sensor columns");
  auto* gt = sub->add_flag("--ground-truth", o->ground_truth, "Use the fx,fy,fz columns of the input instead");
  w->excludes(gt);
  sub->add_option("--input", o->input, "frames.csv")->required();
  sub->add_option("--config", o->config, "Contact config (YAML)");
  sub->add_option("--out", o->out, "Write events.jsonl and states.csv here (events go to stdout otherwise)");
  sub->callback([o] {
    if (o->weights.empty() && !o->ground_truth) throw CLI::RequiredError("--weights or --ground-truth");
    const auto cfg = load_contact_config(o->config);
    if (!o->out.empty()) {
      YAML::Node resolved;
      resolved["command"] = "detect";
      resolved["input"] = o->input;
      resolved["weights"] = o->weights;
      resolved["ground_truth"] = o->ground_truth;
      resolved["contact"] = contact_to_yaml(cfg);
      echo_resolved(o->out, resolved);
    }
    const auto file = io::read_frames_csv(o->input, false);
    std::vector<ForceVector> forces;
    if (o->ground_truth) {
      if (!file.has_labels) throw DataError(o->input + ": no fx,fy,fz columns for --ground-truth");
      forces = file.labels;
    } else {
      forces = estimate_stream(TrainedModel::load(o->weights), file.frames);
    }
    const double dt = file.frames.size() > 1 ? file.frames[1].t - file.frames[0].t : kSamplePeriod;
    const auto result = contact::classify_stream(forces, cfg, dt);

    std::string events;
    for (const auto& e : result.events) {
      std::ostringstream line;
      line << "{\"event\":\"" << contact::to_string(e.kind) << "\",\"frame\":" << e.frame
           << ",\"t\":" << (e.frame < file.frames.size() ? file.frames[e.frame].t : e.t) << "}\n";
      events += line.str();
    }
    if (o->out.empty()) {
      std::cout << events;
      return;
    }
    std::string states = "t,state,f_n,f_f,ratio,fx,fy,fz\n";
    for (std::size_t i = 0; i < result.states.size(); ++i) {
      const auto& s = result.states[i];
      append_double(states, file.frames[i].t);
      states += ",";
      states += contact::to_string(s.state);
      states += ",";
      append_double(states, s.f_n);
      states += ",";
      append_double(states, s.f_f);
      states += ",";
      if (s.ratio) append_double(states, *s.ratio);
      for (double v : forces[i].as_array()) {
        states += ",";
        append_double(states, v);
      }
      states += "\n";
    }
    write_text(fs::path(o->out) / "events.jsonl", events);
    write_text(fs::path(o->out) / "states.csv", states);
    std::cout << result.events.size() << " events, " << result.states.size() << " frames\n";
  });
}

void register_replay(CLI::App& app) {
  struct Opts {
    std::string scenario, weights, config, out;
    std::uint64_t seed = 0;
    std::uint64_t calibration_seed = 1000;
    double threshold = 0.0;
    bool no_noise = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("replay", "Run a slip or plug-insertion scenario through the estimation pipeline");
  sub->add_option("--scenario", o->scenario, "slip_test, plug_success, plug_overpush or plug_misalign")->required();
  sub->add_option("--weights", o->weights, "Weights file (ground-truth forces when omitted)");
  sub->add_option("--config", o->config, "Contact config (YAML)");
  sub->add_option("--seed", o->seed, "Scenario seed")->capture_default_str();
  sub->add_option("--calibration-seed", o->calibration_seed, "Seed of the plug_success calibration run")
      ->capture_default_str();
  auto* th = sub->add_option("--threshold", o->threshold, "Excursion threshold in N (calibrated when omitted)");
  sub->add_flag("--no-noise", o->no_noise, "Disable sensor artifacts and label noise");
  sub->add_option("--out", o->out, "Write report.json here (stdout otherwise)");
  sub->callback([o, th] {
    const auto kind = scenario::parse_scenario(o->scenario);
    scenario::ReplayConfig cfg;
    cfg.seed = o->seed;
    cfg.calibration_seed = o->calibration_seed;
    cfg.noise = !o->no_noise;
    cfg.contact = load_contact_config(o->config);
    if (th->count()) cfg.excursion_threshold = o->threshold;
    if (!o->out.empty()) {
      YAML::Node resolved;
      resolved["command"] = "replay";
      resolved["scenario"] = o->scenario;
      resolved["weights"] = o->weights;
      resolved["seed"] = o->seed;
      resolved["calibration_seed"] = o->calibration_seed;
      resolved["noise"] = cfg.noise;
      if (cfg.excursion_threshold) resolved["threshold"] = *cfg.excursion_threshold;
      resolved["contact"] = contact_to_yaml(cfg.contact);
      echo_resolved(o->out, resolved);
    }
    std::optional<TrainedModel> model;
    if (!o->weights.empty()) model = TrainedModel::load(o->weights);
    const auto report = scenario::replay_scenario(kind, model ? &*model : nullptr, cfg);
    if (o->out.empty()) {
      std::cout << report.to_json();
    } else {
      write_text(fs::path(o->out) / "report.json", report.to_json());
      std::cout << scenario::to_string(kind) << ": " << report.excursions.size() << " excursion(s) above "
                << report.excursion_threshold << " N, " << report.contact.events.size() << " contact event(s)\n";
    }
  });
}

void register_report(CLI::App& app) {
  struct Opts {
    std::string in, out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("report", "Normalize result rows and write results.csv and summary.json");
  sub->add_option("--in", o->in, "results.csv or ledger.jsonl")->required();
  sub->add_option("--out", o->out, "Output directory")->required();
  sub->callback([o] {
    YAML::Node resolved;
    resolved["command"] = "report";
    resolved["in"] = o->in;
    echo_resolved(o->out, resolved);
    const fs::path in(o->in);
    const auto rows = in.extension() == ".jsonl" ? exp::read_ledger(in) : exp::read_results_csv(in);
    exp::report(rows, o->out);
    std::cout << rows.size() << " rows, best: " << row_to_json(exp::best_row(rows)) << "\n";
  });
}

}  // namespace softtouch::cli
