#pragma once

#include <vector>

namespace trickle {

/// Exact pmf of H(n) by forward dynamic programming over (updated nodes a,
/// last update size u), starting from U_0 = 1. Entry m is P[H(n) = m].
std::vector<double> hop_pmf_dp(int R, int n);

struct MeanVariance {
  double mean = 0;
  double variance = 0;
};

struct ExactMoments {
  MeanVariance hops;
  MeanVariance delay;
};

/// Exact first two moments of H(n) and T(n). The DP carries probability and
/// the conditional first and second moments through each (a, u) state.
ExactMoments exact_moments_dp(int R, double eta, int n);

inline MeanVariance delay_moments_dp(int R, double eta, int n) {
  return exact_moments_dp(R, eta, n).delay;
}

}  // namespace trickle
