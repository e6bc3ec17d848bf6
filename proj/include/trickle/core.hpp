#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "trickle/random.hpp"

namespace trickle {

/// Sentinel for an unbounded maximum interval. Nodes sitting at an infinite
/// interval never fire and never reach the end of their interval.
inline constexpr double infinite_interval = std::numeric_limits<double>::infinity();

/// Protocol configuration: redundancy constant k, interval bounds and the
/// listen-only fraction eta used while the interval is at its minimum.
struct TrickleParams {
  int k = 1;
  double tau_l = 1.0;
  double tau_h = infinite_interval;
  double eta = 0.5;

  void validate() const {
    if (k < 1) throw std::invalid_argument("redundancy constant k must be >= 1");
    if (!(tau_l > 0.0) || !std::isfinite(tau_l))
      throw std::invalid_argument("tau_l must be a positive finite number");
    if (!(tau_h >= tau_l)) throw std::invalid_argument("tau_h must be >= tau_l");
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  }
};

struct NodeState {
  double tau = 1.0;
  int c = 0;
  double t = 0.0;  // broadcast offset relative to interval_start
  double interval_start = 0.0;
  std::uint64_t version = 0;
  bool has_fired = false;
};

struct Message {
  std::uint64_t version = 0;
  int sender = 0;
};

enum class Reaction {
  consistent_heard,
  adopted_update,
  inconsistency_reset,
};

struct MessageOutcome {
  NodeState state;
  Reaction reaction;
  bool new_interval = false;
};

struct TimerOutcome {
  NodeState state;
  std::optional<Message> broadcast;
};

/// Window [lo, hi] from which the broadcast offset is drawn for interval size
/// `tau`: [eta*tau, tau] at the minimum interval, [tau/2, tau] otherwise.
inline std::pair<double, double> broadcast_window(double tau, const TrickleParams& params) {
  const double lo_fraction = tau == params.tau_l ? params.eta : 0.5;
  return {lo_fraction * tau, tau};
}

template <class URBG>
NodeState start_interval(NodeState state, const TrickleParams& params, double now, URBG& rng) {
  state.c = 0;
  state.interval_start = now;
  state.has_fired = false;
  if (std::isinf(state.tau)) {
    state.t = infinite_interval;
  } else {
    const auto [lo, hi] = broadcast_window(state.tau, params);
    state.t = uniform_real(rng, lo, hi);
  }
  return state;
}

/// Rules 2 and 5. A strictly newer version is always adopted and restarts the
/// node at tau_l, including when it is already at tau_l.
template <class URBG>
MessageOutcome on_message(NodeState state, const TrickleParams& params, const Message& msg,
                          double now, URBG& rng) {
  if (msg.version == state.version) {
    ++state.c;
    return {state, Reaction::consistent_heard, false};
  }
  if (msg.version > state.version) {
    state.version = msg.version;
    state.tau = params.tau_l;
    return {start_interval(state, params, now, rng), Reaction::adopted_update, true};
  }
  if (state.tau > params.tau_l) {
    state.tau = params.tau_l;
    return {start_interval(state, params, now, rng), Reaction::inconsistency_reset, true};
  }
  return {state, Reaction::inconsistency_reset, false};
}

/// Rule 3: fire if fewer than k consistent messages were heard.
inline TimerOutcome on_timer(NodeState state, const TrickleParams& params, int self) {
  std::optional<Message> out;
  if (!state.has_fired && state.c < params.k) out = Message{state.version, self};
  state.has_fired = true;
  return {state, out};
}

/// Rule 4: double the interval up to tau_h and start over.
template <class URBG>
NodeState on_interval_end(NodeState state, const TrickleParams& params, double now, URBG& rng) {
  state.tau = std::min(2.0 * state.tau, params.tau_h);
  return start_interval(state, params, now, rng);
}

inline const char* to_string(Reaction r) {
  switch (r) {
    case Reaction::consistent_heard: return "consistent_heard";
    case Reaction::adopted_update: return "adopted_update";
    case Reaction::inconsistency_reset: return "inconsistency_reset";
  }
  return "unknown";
}

}  // namespace trickle
