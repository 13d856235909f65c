#include <gtest/gtest.h>

#include <cstdlib>
#include <optional>
#include <random>

#include "softtouch/contact.hpp"
#include "softtouch/finger_sim.hpp"

using namespace softtouch;
using namespace softtouch::contact;

namespace {

std::vector<ForceVector> repeat(const ForceVector& f, std::size_t n) { return std::vector<ForceVector>(n, f); }

std::vector<ForceVector> concat(std::initializer_list<std::vector<ForceVector>> parts) {
  std::vector<ForceVector> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Episode coulomb_episode(double mu, double distance = 30.0) {
  sim::FingerModel f;
  f.k_normal = 2.0;
  f.k_tangent = 0.5;
  f.rest_indentation = 1.2;
  f.mu = mu;
  sim::MotionSchedule s;
  s.distance = distance;
  return sim::simulate_episode({}, f, sim::SensorArtifactModel::identity(), s);
}

std::vector<ForceVector> slipping_labels(const Episode& ep) {
  std::vector<ForceVector> out;
  for (std::size_t i = 0; i < ep.size(); ++i) {
    if (ep.phases[i].is_slipping) out.push_back(ep.labels[i]);
  }
  return out;
}

}  // namespace

TEST(ClassifyFrame, Examples) {
  const ContactStateConfig cfg;
  EXPECT_EQ(classify_frame({0, 0, 0}, cfg).state, State::Noncontact);
  EXPECT_FALSE(classify_frame({0, 0, 0}, cfg).ratio.has_value());

  const auto stick = classify_frame({1, 4, 3}, cfg);
  EXPECT_EQ(stick.state, State::ContactStick);
  EXPECT_DOUBLE_EQ(stick.f_n, 5.0);
  EXPECT_DOUBLE_EQ(*stick.ratio, 0.2);
  EXPECT_TRUE(stick.in_contact());

  const auto slip = classify_frame({4, 4, 3}, cfg);
  EXPECT_EQ(slip.state, State::ContactSlip);
  EXPECT_DOUBLE_EQ(*slip.ratio, 0.8);
}

TEST(ClassifyFrame, BandHoldsPreviousState) {
  const ContactStateConfig cfg;
  const ForceVector in_band{0.62, 1.0, 0.0};
  const auto from_slip = classify_frame(in_band, cfg, State::ContactSlip);
  EXPECT_EQ(from_slip.state, State::ContactSlip);
  EXPECT_TRUE(from_slip.in_band);
  EXPECT_EQ(classify_frame(in_band, cfg, State::ContactStick).state, State::ContactStick);
  EXPECT_EQ(classify_frame(in_band, cfg, State::Noncontact).state, State::ContactStick);
  EXPECT_FALSE(classify_frame({0.2, 1.0, 0.0}, cfg).in_band);
}

TEST(ClassifyFrame, NoncontactAtOrBelowEpsilon) {
  const ContactStateConfig cfg;
  EXPECT_EQ(classify_frame({10.0, 0.05, 0.0}, cfg).state, State::Noncontact);
  EXPECT_EQ(classify_frame({0.0, 0.0501, 0.0}, cfg).state, State::ContactStick);
}

TEST(ClassifyFrame, ScaleCovariant) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  const ContactStateConfig cfg;
  for (int i = 0; i < 2000; ++i) {
    const ForceVector f{u(rng), u(rng), u(rng)};
    const double c = scale(rng);
    const auto a = classify_frame(f, cfg, State::ContactStick);
    const auto b = classify_frame(c * f, cfg, State::ContactStick);
    if (a.f_n > cfg.contact_eps && b.f_n > cfg.contact_eps) EXPECT_EQ(a.state, b.state);
  }
}

TEST(ContactStateConfig, ValidateAndCoulombPreset) {
  ContactStateConfig c;
  EXPECT_NO_THROW(c.validate());
  c.min_dwell = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.mu_threshold = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  const auto k = ContactStateConfig::for_coulomb(0.6);
  EXPECT_NEAR(k.mu_threshold + k.ratio_hysteresis, 0.594, 1e-12);
  EXPECT_NEAR(k.mu_threshold - k.ratio_hysteresis, 0.582, 1e-12);
  EXPECT_EQ(classify_frame({0.6, 1.0, 0.0}, k).state, State::ContactSlip);
}

TEST(ClassifyStream, AllZeroStream) {
  const auto r = classify_stream(repeat({0, 0, 0}, 100), {});
  EXPECT_TRUE(r.events.empty());
  for (const auto& s : r.states) EXPECT_EQ(s.state, State::Noncontact);
}

TEST(ClassifyStream, SlipNeedsMinDwellFrames) {
  const ContactStateConfig cfg;
  const auto forces = concat({repeat({0, 0, 0}, 10), repeat({1, 4, 3}, 10), repeat({4, 4, 3}, 10)});
  const auto r = classify_stream(forces, cfg);
  ASSERT_EQ(r.events.size(), 2u);
  EXPECT_EQ(r.events[0].kind, EventKind::ContactOnset);
  EXPECT_EQ(r.events[0].frame, 14u);
  EXPECT_NEAR(r.events[0].t, 0.14, 1e-12);
  EXPECT_EQ(r.events[1].kind, EventKind::SlipOnset);
  EXPECT_EQ(r.events[1].frame, 24u);
  EXPECT_EQ(r.states[23].state, State::ContactStick);
  EXPECT_EQ(r.states[24].state, State::ContactSlip);
}

TEST(ClassifyStream, ShortBurstIsIgnored) {
  const auto forces = concat({repeat({1, 4, 3}, 20), repeat({4, 4, 3}, 4), repeat({1, 4, 3}, 20)});
  const auto r = classify_stream(forces, {});
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.events[0].kind, EventKind::ContactOnset);
}

TEST(ClassifyStream, ReleaseEvent) {
  const auto forces = concat({repeat({1, 4, 3}, 20), repeat({0, 0, 0}, 20)});
  const auto r = classify_stream(forces, {});
  ASSERT_EQ(r.events.size(), 2u);
  EXPECT_EQ(r.events[1].kind, EventKind::Release);
  EXPECT_EQ(r.events[1].frame, 24u);
}

TEST(ClassifyStream, LowRatioNeverSlips) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  std::vector<ForceVector> forces;
  for (int i = 0; i < 1000; ++i) forces.push_back({u(rng) * 2.0, 2.0, 0.0});
  const auto r = classify_stream(forces, {});
  for (const auto& e : r.events) EXPECT_NE(e.kind, EventKind::SlipOnset);
}

TEST(ClassifyStream, NoRunShorterThanMinDwell) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int dwell : {1, 3, 5, 8}) {
    ContactStateConfig cfg;
    cfg.min_dwell = dwell;
    std::vector<ForceVector> forces;
    for (int i = 0; i < 3000; ++i) {
      const double fn = u(rng) < 0.1 ? 0.0 : 1.0;
      forces.push_back({u(rng) * 1.2 * fn, fn, 0.0});
    }
    const auto r = classify_stream(forces, cfg);
    std::size_t run = 1;
    for (std::size_t i = 1; i < r.states.size(); ++i) {
      if (r.states[i].state == r.states[i - 1].state) {
        ++run;
      } else {
        EXPECT_GE(run, static_cast<std::size_t>(dwell)) << "run ending at " << i;
        run = 1;
      }
    }
  }
}

TEST(ClassifyStream, ReplaysAreIdempotent) {
  const auto ep = coulomb_episode(0.6);
  const auto cfg = ContactStateConfig::for_coulomb(0.6);
  const auto a = classify_stream(ep.labels, cfg);
  const auto b = classify_stream(ep.labels, cfg);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_EQ(a.events[i].kind, b.events[i].kind);
    EXPECT_EQ(a.events[i].frame, b.events[i].frame);
  }
  StreamClassifier c(cfg);
  std::vector<Event> first, second;
  for (const auto& f : ep.labels) c.step(f, first);
  c.reset();
  for (const auto& f : ep.labels) c.step(f, second);
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) EXPECT_EQ(first[i].frame, second[i].frame);
}

TEST(ClassifyStream, SlipOnsetMatchesSimulator) {
  const ContactStateConfig base;
  for (double mu : {0.6, 0.9}) {
    const auto ep = coulomb_episode(mu);
    const auto cfg = ContactStateConfig::for_coulomb(mu);
    std::size_t truth = 0;
    while (!ep.phases[truth].is_slipping) ++truth;
    const auto r = classify_stream(ep.labels, cfg);
    std::optional<std::size_t> detected;
    for (const auto& e : r.events) {
      if (e.kind == EventKind::SlipOnset) {
        detected = e.frame;
        break;
      }
    }
    ASSERT_TRUE(detected.has_value()) << "mu " << mu;
    const long err = static_cast<long>(*detected) - static_cast<long>(truth);
    EXPECT_LE(std::abs(err), 2 * base.min_dwell) << "mu " << mu;
  }
}

TEST(FrictionEstimate, RecoversConfiguredMuNoiseFree) {
  for (double mu : {0.6, 0.9}) {
    const auto ep = coulomb_episode(mu);
    EXPECT_NEAR(friction_coefficient_estimate(slipping_labels(ep)), mu, 1e-6);
  }
}

TEST(FrictionEstimate, InvariantToUniformScaling) {
  auto forces = slipping_labels(coulomb_episode(0.6));
  const double a = friction_coefficient_estimate(forces);
  for (auto& f : forces) f = 3.7 * f;
  EXPECT_NEAR(friction_coefficient_estimate(forces), a, 1e-12);
}

TEST(FrictionEstimate, NoSlipObserved) {
  try {
    friction_coefficient_estimate({});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "no slip observed");
  }
  // Fewer than min_dwell usable frames.
  const auto few = repeat({0.6, 1.0, 0.0}, 4);
  EXPECT_THROW(friction_coefficient_estimate(few), DataError);
  const auto none = repeat({0.6, 0.0, 0.0}, 40);
  EXPECT_THROW(friction_coefficient_estimate(none), DataError);
  // A drag too short to reach the Coulomb limit does not slip before release.
  const auto ep = coulomb_episode(0.6, 0.5);
  std::vector<ForceVector> moving;
  for (std::size_t i = 0; i < ep.size(); ++i) {
    if (ep.phases[i].phase == Phase::Moving && ep.phases[i].is_slipping) moving.push_back(ep.labels[i]);
  }
  EXPECT_THROW(friction_coefficient_estimate(moving), DataError);
}

TEST(ContactState, Strings) {
  EXPECT_EQ(to_string(State::ContactSlip), "slip");
  EXPECT_EQ(to_string(EventKind::SlipOnset), "slip_onset");
}
