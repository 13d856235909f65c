#include "softtouch/contact.hpp"

#include <algorithm>
#include <stdexcept>

#include "softtouch/preprocess.hpp"

namespace softtouch::contact {

void ContactStateConfig::validate() const {
  if (!(mu_threshold > 0.0)) throw std::invalid_argument("contact config: mu_threshold must be > 0");
  if (min_dwell < 1) throw std::invalid_argument("contact config: min_dwell must be >= 1");
  if (contact_eps < 0.0 || ratio_hysteresis < 0.0) {
    throw std::invalid_argument("contact config: contact_eps and ratio_hysteresis must be >= 0");
  }
}

ContactStateConfig ContactStateConfig::for_coulomb(double mu) {
  ContactStateConfig c;
  c.ratio_hysteresis = 0.01 * mu;
  c.mu_threshold = mu - 2.0 * c.ratio_hysteresis;
  return c;
}

std::string_view to_string(State s) {
  switch (s) {
    case State::Noncontact: return "noncontact";
    case State::ContactStick: return "stick";
    case State::ContactSlip: return "slip";
  }
  return "unknown";
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::ContactOnset: return "contact_onset";
    case EventKind::SlipOnset: return "slip_onset";
    case EventKind::Release: return "release";
  }
  return "unknown";
}

ContactState classify_frame(const ForceVector& f, const ContactStateConfig& cfg, State prev) {
  const auto ff = friction_features(f, cfg.contact_eps);
  ContactState s;
  s.f_n = ff.f_n;
  s.f_f = ff.f_f;
  s.ratio = ff.ratio;
  if (!ff.ratio) {
    s.state = State::Noncontact;
    return s;
  }
  const double r = *ff.ratio;
  if (r < cfg.mu_threshold - cfg.ratio_hysteresis) {
    s.state = State::ContactStick;
  } else if (r > cfg.mu_threshold + cfg.ratio_hysteresis) {
    s.state = State::ContactSlip;
  } else {
    s.in_band = true;
    // Coming out of noncontact there is no previous ratio to hold; stick is the conservative choice.
    s.state = prev == State::Noncontact ? State::ContactStick : prev;
  }
  return s;
}

StreamClassifier::StreamClassifier(ContactStateConfig cfg, double dt) : cfg_(cfg), dt_(dt) { cfg_.validate(); }

void StreamClassifier::reset() {
  state_ = pending_ = State::Noncontact;
  pending_count_ = run_length_ = 0;
  frame_ = 0;
}

ContactState StreamClassifier::step(const ForceVector& f, std::vector<Event>& events) {
  ContactState s = classify_frame(f, cfg_, state_);
  const State candidate = s.state;
  if (candidate == state_) {
    pending_count_ = 0;
  } else if (candidate == pending_ && pending_count_ > 0) {
    ++pending_count_;
  } else {
    pending_ = candidate;
    pending_count_ = 1;
  }

  if (pending_count_ >= cfg_.min_dwell && run_length_ >= cfg_.min_dwell) {
    const State from = state_;
    state_ = pending_;
    pending_count_ = 0;
    run_length_ = 0;
    const double t = static_cast<double>(frame_) * dt_;
    if (from == State::Noncontact) events.push_back({EventKind::ContactOnset, frame_, t});
    if (state_ == State::ContactSlip) events.push_back({EventKind::SlipOnset, frame_, t});
    if (state_ == State::Noncontact) events.push_back({EventKind::Release, frame_, t});
  }
  ++run_length_;
  ++frame_;
  s.state = state_;
  return s;
}

StreamResult classify_stream(std::span<const ForceVector> forces, const ContactStateConfig& cfg, double dt) {
  StreamClassifier c(cfg, dt);
  StreamResult r;
  r.states.reserve(forces.size());
  for (const auto& f : forces) r.states.push_back(c.step(f, r.events));
  return r;
}

double friction_coefficient_estimate(std::span<const ForceVector> slip_forces, const ContactStateConfig& cfg) {
  std::vector<double> ratios;
  ratios.reserve(slip_forces.size());
  for (const auto& f : slip_forces) {
    const auto ff = friction_features(f, cfg.contact_eps);
    if (ff.ratio) ratios.push_back(*ff.ratio);
  }
  if (ratios.empty() || ratios.size() < static_cast<std::size_t>(std::max(1, cfg.min_dwell))) {
    throw DataError("no slip observed");
  }
  std::sort(ratios.begin(), ratios.end());
  return prep::quantile_sorted(ratios, 0.5);
}

}  // namespace softtouch::contact
