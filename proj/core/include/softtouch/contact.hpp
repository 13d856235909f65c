#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "softtouch/types.hpp"

namespace softtouch::contact {

struct ContactStateConfig {
  double mu_threshold = 0.6;
  double contact_eps = kDefaultNormalEpsilon;  // N
  double ratio_hysteresis = 0.05;              // half-width of the band around mu_threshold
  int min_dwell = 5;                           // frames

  void validate() const;

  /// Settings for forces that obey Coulomb friction exactly, where the ratio during slip sits at
  /// mu and never above it: a band of 1% of mu placed just below mu, so slip is declared once the
  /// ratio exceeds 0.99 mu and stick once it drops below 0.97 mu.
  static ContactStateConfig for_coulomb(double mu);
};

enum class State { Noncontact, ContactStick, ContactSlip };
std::string_view to_string(State s);

struct ContactState {
  State state = State::Noncontact;
  double f_n = 0.0;
  double f_f = 0.0;
  std::optional<double> ratio;
  bool in_band = false;  // ratio inside the hysteresis band (reported as micro slip, never an event)

  /// The union of stick and slip.
  bool in_contact() const { return state != State::Noncontact; }
};

/// Instantaneous rule: Noncontact when f_n <= contact_eps; otherwise stick below the band, slip
/// above it, and `prev` inside it. Debouncing is done by StreamClassifier.
ContactState classify_frame(const ForceVector& f, const ContactStateConfig& cfg, State prev = State::Noncontact);

enum class EventKind { ContactOnset, SlipOnset, Release };
std::string_view to_string(EventKind k);

struct Event {
  EventKind kind = EventKind::ContactOnset;
  std::size_t frame = 0;  // frame at which the debounced transition took effect
  double t = 0.0;
};

/// Sequential debounced classifier. A new state takes effect once min_dwell consecutive frames
/// agree on it and the current state has lasted at least min_dwell frames, so no run of states
/// is shorter than min_dwell (except a final run cut off by the end of the stream).
class StreamClassifier {
 public:
  explicit StreamClassifier(ContactStateConfig cfg, double dt = kSamplePeriod);

  /// Classifies the next frame; any events it triggers are appended to `events`.
  ContactState step(const ForceVector& f, std::vector<Event>& events);
  State state() const { return state_; }
  void reset();

 private:
  ContactStateConfig cfg_;
  double dt_;
  State state_ = State::Noncontact;
  State pending_ = State::Noncontact;
  int pending_count_ = 0;
  int run_length_ = 0;
  std::size_t frame_ = 0;
};

struct StreamResult {
  std::vector<ContactState> states;
  std::vector<Event> events;
};

StreamResult classify_stream(std::span<const ForceVector> forces, const ContactStateConfig& cfg,
                             double dt = kSamplePeriod);

/// Median of F_f / F_n over the supplied slip-phase forces with F_n > contact_eps.
/// Throws DataError("no slip observed") with fewer than min_dwell such frames.
double friction_coefficient_estimate(std::span<const ForceVector> slip_forces, const ContactStateConfig& cfg = {});

}  // namespace softtouch::contact
