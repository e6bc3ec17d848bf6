#include "trickle/propagation.hpp"

#include <algorithm>
#include <exception>
#include <queue>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "trickle/errors.hpp"

namespace trickle {

void LineTopology::validate() const {
  if (n < 1) throw std::invalid_argument("line needs n >= 1");
  if (R < 1) throw std::invalid_argument("transmission range R must be >= 1");
}

std::pair<int, int> LineTopology::reach(int i) const {
  return {std::max(0, i - R), std::min(n, i + R)};
}

namespace {

// Ties at equal times resolve by node, then by kind in this order.
enum class EventKind : int { delivery = 0, timer = 1, interval_end = 2 };

struct Event {
  double time;
  int node;
  EventKind kind;
  std::uint64_t epoch;
  Message msg;
  int broadcast;
};

struct LaterFirst {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.time, a.node, a.kind) > std::tie(b.time, b.node, b.kind);
  }
};

class LineSimulation {
 public:
  LineSimulation(const TrickleParams& params, const LineTopology& topo, random_engine& rng,
                 double horizon)
      : params_(params),
        topo_(topo),
        rng_(rng),
        horizon_(horizon > 0 ? horizon : 10.0 * topo.n * params.tau_l),
        nodes_(topo.n + 1),
        epoch_(topo.n + 1, 0) {
    trace_.update_time.assign(topo.n + 1, infinite_interval);
    trace_.update_hop.assign(topo.n + 1, -1);
  }

  PropagationTrace run() {
    for (int i = 1; i <= topo_.n; ++i) {
      NodeState& s = nodes_[i];
      s.tau = params_.tau_h;
      if (std::isinf(params_.tau_h)) {
        s = start_interval(s, params_, 0.0, rng_);
      } else {
        // Steady-state nodes: random phase within their current interval.
        const double phase = uniform_real(rng_, 0.0, params_.tau_h);
        s = start_interval(s, params_, -phase, rng_);
        if (s.interval_start + s.t < 0.0) s.has_fired = true;
      }
      schedule(i);
    }

    NodeState& origin = nodes_[0];
    origin.version = 1;
    origin.tau = params_.tau_l;
    origin = start_interval(origin, params_, 0.0, rng_);
    trace_.update_time[0] = 0.0;
    trace_.update_hop[0] = 0;
    ++epoch_[0];
    schedule(0);

    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      if (ev.time > horizon_)
        throw non_termination("node " + std::to_string(topo_.n) + " not updated by time " +
                              std::to_string(horizon_));
      if (ev.kind != EventKind::delivery && ev.epoch != epoch_[ev.node]) continue;
      switch (ev.kind) {
        case EventKind::delivery:
          if (deliver(ev)) return finish();
          break;
        case EventKind::timer:
          fire(ev);
          break;
        case EventKind::interval_end:
          nodes_[ev.node] = on_interval_end(nodes_[ev.node], params_, ev.time, rng_);
          ++epoch_[ev.node];
          schedule(ev.node);
          break;
      }
    }
    throw non_termination("event queue drained before node " + std::to_string(topo_.n) +
                          " was updated");
  }

 private:
  void schedule(int i) {
    const NodeState& s = nodes_[i];
    const double fire_at = s.interval_start + s.t;
    const double end_at = s.interval_start + s.tau;
    if (!s.has_fired && std::isfinite(fire_at))
      queue_.push({fire_at, i, EventKind::timer, epoch_[i], {}, -1});
    if (std::isfinite(end_at)) queue_.push({end_at, i, EventKind::interval_end, epoch_[i], {}, -1});
  }

  void fire(const Event& ev) {
    auto [state, msg] = on_timer(nodes_[ev.node], params_, ev.node);
    nodes_[ev.node] = state;
    if (!msg) return;
    const int id = static_cast<int>(trace_.broadcasts.size());
    trace_.broadcasts.push_back({ev.time, ev.node, 0});
    broadcast_hop_.push_back(0);
    ++trace_.message_count;
    const auto [lo, hi] = topo_.reach(ev.node);
    for (int j = lo; j <= hi; ++j)
      if (j != ev.node) queue_.push({ev.time, j, EventKind::delivery, 0, *msg, id});
  }

  // Returns true once node n holds the update.
  bool deliver(const Event& ev) {
    const int j = ev.node;
    const MessageOutcome out = on_message(nodes_[j], params_, ev.msg, ev.time, rng_);
    nodes_[j] = out.state;
    if (out.reaction == Reaction::adopted_update) {
      if (broadcast_hop_[ev.broadcast] == 0) broadcast_hop_[ev.broadcast] = ++effective_;
      ++trace_.broadcasts[ev.broadcast].updated;
      trace_.update_time[j] = ev.time;
      trace_.update_hop[j] = broadcast_hop_[ev.broadcast];
    }
    if (out.new_interval) {
      ++epoch_[j];
      schedule(j);
    }
    return out.reaction == Reaction::adopted_update && j == topo_.n;
  }

  PropagationTrace finish() {
    trace_.hop_count = effective_;
    trace_.end_to_end_delay = trace_.update_time[topo_.n];
    trace_.final_states = nodes_;
    return std::move(trace_);
  }

  const TrickleParams& params_;
  const LineTopology& topo_;
  random_engine& rng_;
  double horizon_;
  std::vector<NodeState> nodes_;
  std::vector<std::uint64_t> epoch_;
  std::priority_queue<Event, std::vector<Event>, LaterFirst> queue_;
  PropagationTrace trace_;
  std::vector<int> broadcast_hop_;
  int effective_ = 0;
};

}  // namespace

PropagationTrace run_protocol_event(const TrickleParams& params, const LineTopology& topo,
                                    random_engine& rng, double horizon) {
  params.validate();
  topo.validate();
  return LineSimulation(params, topo, rng, horizon).run();
}

PropagationTrace run_protocol_event(const TrickleParams& params, const LineTopology& topo,
                                    std::uint64_t seed, double horizon) {
  random_engine rng(seed);
  return run_protocol_event(params, topo, rng, horizon);
}

HopDelay sample_renewal_event(int R, int n, double eta, random_engine& rng) {
  if (R < 1 || n < 1) throw std::invalid_argument("renewal sampler needs R >= 1 and n >= 1");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  HopDelay out;
  int updated = 0;
  int u = 1;
  while (updated < n) {
    out.T += inter_transmission_time(u, eta, rng);
    u = next_update_size(R, u, rng);
    updated += u;
    ++out.H;
  }
  return out;
}

HopDelay sample_renewal_event(int R, int n, double eta, std::uint64_t seed) {
  random_engine rng(seed);
  return sample_renewal_event(R, n, eta, rng);
}

std::vector<double> renewal_step_times(int R, double eta, std::size_t steps, random_engine& rng) {
  if (R < 1) throw std::invalid_argument("transmission range R must be >= 1");
  // U_0 from the stationary law 2u/(R(R+1)) by inversion of u(u+1)/(R(R+1)).
  const double x = uniform01(rng) * R * (R + 1);
  int u = 1;
  while (u < R && u * (u + 1) <= x) ++u;
  std::vector<double> out(steps);
  for (auto& theta : out) {
    theta = inter_transmission_time(u, eta, rng);
    u = next_update_size(R, u, rng);
  }
  return out;
}

SampleSet monte_carlo(const SimulationConfig& config, int reps, std::uint64_t seed,
                      unsigned threads) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  config.params.validate();
  config.topo.validate();

  SampleSet out;
  out.h_samples.assign(reps, 0);
  out.t_samples.assign(reps, 0.0);
  out.meta = {config.topo.R, config.topo.n, config.params.eta, config.params.k,
              reps, seed, config.engine, config.params.tau_l, config.params.tau_h};

  const auto run_one = [&](int rep) {
    random_engine rng = make_stream(seed, static_cast<std::uint64_t>(rep));
    if (config.engine == Engine::renewal) {
      const HopDelay hd = sample_renewal_event(config.topo.R, config.topo.n, config.params.eta, rng);
      out.h_samples[rep] = hd.H;
      out.t_samples[rep] = hd.T;
    } else {
      const PropagationTrace tr = run_protocol_event(config.params, config.topo, rng, config.horizon);
      out.h_samples[rep] = tr.hop_count;
      out.t_samples[rep] = tr.end_to_end_delay;
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));
  if (threads == 1) {
    for (int rep = 0; rep < reps; ++rep) run_one(rep);
    return out;
  }

  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      const int begin = static_cast<int>(static_cast<long long>(reps) * w / threads);
      const int end = static_cast<int>(static_cast<long long>(reps) * (w + 1) / threads);
      try {
        for (int rep = begin; rep < end; ++rep) run_one(rep);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

const char* to_string(Engine e) { return e == Engine::protocol ? "protocol" : "renewal"; }

Engine parse_engine(const std::string& name) {
  if (name == "protocol") return Engine::protocol;
  if (name == "renewal") return Engine::renewal;
  throw std::invalid_argument("unknown engine '" + name + "' (expected protocol or renewal)");
}

}  // namespace trickle
