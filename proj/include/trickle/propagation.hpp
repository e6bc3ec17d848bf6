#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trickle/core.hpp"
#include "trickle/random.hpp"

namespace trickle {

/// n + 1 nodes at unit spacing, indices 0..n, transmission range R.
struct LineTopology {
  int n = 1;
  int R = 1;

  void validate() const;
  /// Receivers of a broadcast from node i: j != i with |i - j| <= R.
  std::pair<int, int> reach(int i) const;
};

struct BroadcastRecord {
  double time = 0;
  int sender = 0;
  int updated = 0;  // receivers that adopted the new version
};

struct PropagationTrace {
  std::vector<double> update_time;
  std::vector<BroadcastRecord> broadcasts;
  int hop_count = 0;
  double end_to_end_delay = 0;
  int message_count = 0;
  /// Index of the effective broadcast that updated each node (0 for node 0,
  /// -1 if never updated).
  std::vector<int> update_hop;
  std::vector<NodeState> final_states;
};

enum class Engine { protocol, renewal };

struct SimulationConfig {
  TrickleParams params;
  LineTopology topo;
  Engine engine = Engine::renewal;
  double horizon = 0;  // 0: 10 * n * tau_l
};

struct SampleMeta {
  int R = 1;
  int n = 1;
  double eta = 0;
  int k = 1;
  int reps = 0;
  std::uint64_t seed = 0;
  Engine engine = Engine::renewal;
  double tau_l = 1;
  double tau_h = infinite_interval;
};

struct SampleSet {
  std::vector<int> h_samples;
  std::vector<double> t_samples;
  SampleMeta meta;
};

/// Full event-driven run of the Trickle state machine on the line until node
/// n holds the update injected at node 0 at time 0. Throws non_termination if
/// the horizon passes first.
PropagationTrace run_protocol_event(const TrickleParams& params, const LineTopology& topo,
                                    random_engine& rng, double horizon = 0);

PropagationTrace run_protocol_event(const TrickleParams& params, const LineTopology& topo,
                                    std::uint64_t seed, double horizon = 0);

/// Next update size given the current one: uniform on {R - u + 1, ..., R}.
template <class URBG>
int next_update_size(int R, int u, URBG& rng) {
  return uniform_int(rng, R - u + 1, R);
}

/// Inter-transmission time after an update of size u: eta + (1 - eta) times
/// the minimum of u uniforms.
template <class URBG>
double inter_transmission_time(int u, double eta, URBG& rng) {
  const double v = 1.0 - uniform01(rng);  // (0, 1]
  const double beta_1u = -std::expm1(std::log(v) / u);
  return eta + (1.0 - eta) * beta_1u;
}

struct HopDelay {
  int H = 0;
  double T = 0;
};

/// Direct sample of (H(n), T(n)) from the Markov renewal process.
HopDelay sample_renewal_event(int R, int n, double eta, random_engine& rng);
HopDelay sample_renewal_event(int R, int n, double eta, std::uint64_t seed);

/// `reps` independent events; replication r uses stream make_stream(seed, r).
/// Output is identical for any thread count.
SampleSet monte_carlo(const SimulationConfig& config, int reps, std::uint64_t seed,
                      unsigned threads = 0);

/// Inter-transmission times of a long renewal path started from the
/// stationary law (used for long-run variance estimates).
std::vector<double> renewal_step_times(int R, double eta, std::size_t steps, random_engine& rng);

const char* to_string(Engine e);
Engine parse_engine(const std::string& name);

}  // namespace trickle
