#include "trickle/exact.hpp"

#include <algorithm>
#include <stdexcept>

#include "trickle/generating.hpp"

namespace trickle {

namespace {

void check_inputs(int R, int n) {
  if (R < 1) throw std::invalid_argument("transmission range R must be >= 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
}

}  // namespace

std::vector<double> hop_pmf_dp(int R, int n) {
  check_inputs(R, n);
  // layer[a * R + (u - 1)]: probability of (A = a, U = u) after the current
  // number of hops, restricted to a < n.
  std::vector<double> layer(static_cast<std::size_t>(n) * R, 0.0);
  std::vector<double> next(layer.size(), 0.0);
  layer[0] = 1.0;  // a = 0, u = 1
  std::vector<double> pmf{0.0};
  int lo = 0;  // smallest a with mass in the current layer
  for (int hops = 0;; ++hops) {
    std::fill(next.begin(), next.end(), 0.0);
    double absorbed = 0.0;
    double remaining = 0.0;
    int next_lo = n;
    for (int a = lo; a < n; ++a)
      for (int u = 1; u <= R; ++u) {
        const double p = layer[static_cast<std::size_t>(a) * R + u - 1];
        if (p == 0.0) continue;
        const double share = p / u;
        for (int v = R - u + 1; v <= R; ++v) {
          const int a2 = a + v;
          if (a2 >= n) {
            absorbed += share;
          } else {
            next[static_cast<std::size_t>(a2) * R + v - 1] += share;
            remaining += share;
            next_lo = std::min(next_lo, a2);
          }
        }
      }
    pmf.push_back(absorbed);
    if (remaining == 0.0) break;
    layer.swap(next);
    lo = next_lo;
  }
  return pmf;
}

ExactMoments exact_moments_dp(int R, double eta, int n) {
  check_inputs(R, n);
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");

  struct Cell {
    double p = 0;   // P[state]
    double h1 = 0;  // E[H 1{state}]
    double h2 = 0;  // E[H^2 1{state}]
    double t1 = 0;  // E[T 1{state}]
    double t2 = 0;  // E[T^2 1{state}]
  };
  std::vector<double> nu1(R + 1), nu2(R + 1);
  for (int u = 1; u <= R; ++u) {
    nu1[u] = step_moment<double>(u, eta, 1);
    nu2[u] = step_moment<double>(u, eta, 2);
  }

  // Transitions strictly increase a, so sweeping a upward visits every state
  // after all of its inflow has arrived.
  std::vector<Cell> cells(static_cast<std::size_t>(n) * R);
  cells[0].p = 1.0;
  Cell done;
  for (int a = 0; a < n; ++a)
    for (int u = 1; u <= R; ++u) {
      const Cell& c = cells[static_cast<std::size_t>(a) * R + u - 1];
      if (c.p == 0.0) continue;
      const double w = 1.0 / u;
      Cell step;
      step.p = w * c.p;
      step.h1 = w * (c.h1 + c.p);
      step.h2 = w * (c.h2 + 2.0 * c.h1 + c.p);
      step.t1 = w * (c.t1 + c.p * nu1[u]);
      step.t2 = w * (c.t2 + 2.0 * c.t1 * nu1[u] + c.p * nu2[u]);
      for (int v = R - u + 1; v <= R; ++v) {
        Cell& dst = a + v >= n ? done : cells[static_cast<std::size_t>(a + v) * R + v - 1];
        dst.p += step.p;
        dst.h1 += step.h1;
        dst.h2 += step.h2;
        dst.t1 += step.t1;
        dst.t2 += step.t2;
      }
    }
  ExactMoments out;
  out.hops = {done.h1, done.h2 - done.h1 * done.h1};
  out.delay = {done.t1, done.t2 - done.t1 * done.t1};
  return out;
}

}  // namespace trickle
