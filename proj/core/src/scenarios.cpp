#include "softtouch/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace softtouch::scenario {

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::SlipTest: return "slip_test";
    case Scenario::PlugSuccess: return "plug_success";
    case Scenario::PlugOverpush: return "plug_overpush";
    case Scenario::PlugMisalign: return "plug_misalign";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view s) {
  for (auto v : {Scenario::SlipTest, Scenario::PlugSuccess, Scenario::PlugOverpush, Scenario::PlugMisalign}) {
    if (to_string(v) == s) return v;
  }
  throw DataError("unknown scenario '" + std::string(s) +
                  "' (expected slip_test, plug_success, plug_overpush or plug_misalign)");
}

ScenarioSetup scenario_setup(Scenario s) {
  ScenarioSetup st;
  st.meta.object_shape = ObjectShape::Convex;
  st.meta.object_size = 30.0;
  st.meta.finger_pressure = 40.0;
  st.meta.repetition = 4;
  st.schedule.hold = 3.0;
  switch (s) {
    case Scenario::SlipTest:
      st.schedule.hold = 0.0;
      break;
    case Scenario::PlugSuccess:
      st.schedule.distance = 0.3;
      break;
    case Scenario::PlugOverpush:
      st.schedule.distance = 8.0;
      st.schedule.extra_indentation = 1.5;
      break;
    case Scenario::PlugMisalign:
      st.schedule.distance = 1.5;
      st.schedule.contact_shift = 12.0;
      st.schedule.extra_indentation = 0.8;
      break;
  }
  return st;
}

std::vector<Excursion> detect_excursions(std::span<const ForceVector> estimate, const ForceVector& baseline,
                                         std::size_t from, std::size_t to, double threshold, int min_dwell) {
  std::vector<Excursion> out;
  to = std::min(to, estimate.size());
  std::optional<Excursion> run;
  auto close = [&](std::size_t end) {
    if (run && end - run->start >= static_cast<std::size_t>(std::max(1, min_dwell))) {
      run->end = end;
      out.push_back(*run);
    }
    run.reset();
  };
  for (std::size_t i = from; i < to; ++i) {
    const double d = (estimate[i] - baseline).norm();
    if (d >= threshold) {
      if (!run) run = Excursion{i, i, 0.0};
      run->peak = std::max(run->peak, d);
    } else {
      close(i);
    }
  }
  close(to);
  return out;
}

namespace {

ReplayReport run(Scenario s, const TrainedModel* model, const ReplayConfig& cfg, double threshold) {
  const auto setup = scenario_setup(s);
  sim::SensorArtifactModel art = cfg.noise ? sim::SensorArtifactModel::defaults() : sim::SensorArtifactModel::identity();
  art.seed = cfg.seed;
  const auto finger = sim::FingerModel::from_condition(setup.meta);
  const Episode ep = sim::simulate_episode(setup.meta, finger, art, setup.schedule);

  ReplayReport r;
  r.scenario = s;
  r.used_model = model != nullptr;
  r.truth = ep.labels;
  r.phases = ep.phases;
  for (const auto& f : ep.frames) r.t.push_back(f.t);
  r.estimate = model ? estimate_stream(*model, ep.frames) : ep.labels;

  nn::ErrorStats err;
  for (std::size_t i = 0; i < ep.size(); ++i) err.add(r.estimate[i], r.truth[i]);
  r.rmse_pooled = err.pooled();

  r.contact = contact::classify_stream(r.estimate, cfg.contact);
  for (std::size_t i = 0; i < ep.size(); ++i) {
    if (ep.phases[i].is_slipping) {
      r.true_slip_onset = i;
      break;
    }
  }
  for (const auto& e : r.contact.events) {
    if (e.kind == contact::EventKind::SlipOnset) {
      r.detected_slip_onset = e.frame;
      break;
    }
  }
  if (r.true_slip_onset && r.detected_slip_onset) {
    r.slip_timing_error = static_cast<long>(*r.detected_slip_onset) - static_cast<long>(*r.true_slip_onset);
  }

  const auto t_m = ep.first_frame_of(Phase::Moving);
  const auto t_r = ep.first_frame_of(Phase::Released);
  if (!t_m) throw std::runtime_error("scenario has no moving phase");
  const std::size_t n_base = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.baseline_window / kSamplePeriod)));
  const std::size_t b0 = *t_m > n_base ? *t_m - n_base : 0;
  ForceVector baseline;
  for (std::size_t i = b0; i < *t_m; ++i) baseline += r.estimate[i];
  if (*t_m > b0) baseline = (1.0 / static_cast<double>(*t_m - b0)) * baseline;
  const std::size_t end = t_r.value_or(ep.size());
  for (std::size_t i = *t_m; i < end; ++i) {
    r.peak_deviation = std::max(r.peak_deviation, (r.estimate[i] - baseline).norm());
  }
  r.excursion_threshold = threshold;
  if (threshold > 0.0) {
    r.excursions = detect_excursions(r.estimate, baseline, *t_m, end, threshold, cfg.contact.min_dwell);
  }
  return r;
}

}  // namespace

double calibrate_excursion_threshold(const TrainedModel* model, const ReplayConfig& cfg) {
  ReplayConfig c = cfg;
  c.seed = cfg.calibration_seed;
  return 3.0 * run(Scenario::PlugSuccess, model, c, 0.0).peak_deviation;
}

ReplayReport replay_scenario(Scenario s, const TrainedModel* model, const ReplayConfig& cfg) {
  cfg.contact.validate();
  const double threshold = cfg.excursion_threshold ? *cfg.excursion_threshold
                                                   : calibrate_excursion_threshold(model, cfg);
  return run(s, model, cfg, threshold);
}

std::string ReplayReport::to_json() const {
  using nlohmann::json;
  json j;
  j["scenario"] = std::string(to_string(scenario));
  j["used_model"] = used_model;
  j["frames"] = truth.size();
  j["rmse_pooled"] = rmse_pooled;
  j["excursion_threshold"] = excursion_threshold;
  j["peak_deviation"] = peak_deviation;
  json ex = json::array();
  for (const auto& e : excursions) ex.push_back({{"start", e.start}, {"end", e.end}, {"peak", e.peak}});
  j["excursions"] = ex;
  json ev = json::array();
  for (const auto& e : contact.events) {
    ev.push_back({{"event", std::string(contact::to_string(e.kind))}, {"frame", e.frame}, {"t", e.t}});
  }
  j["events"] = ev;
  j["true_slip_onset"] = true_slip_onset ? json(*true_slip_onset) : json(nullptr);
  j["detected_slip_onset"] = detected_slip_onset ? json(*detected_slip_onset) : json(nullptr);
  j["slip_timing_error_frames"] = slip_timing_error ? json(*slip_timing_error) : json(nullptr);
  return j.dump(2) + "\n";
}

}  // namespace softtouch::scenario
