#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "trickle/errors.hpp"
#include "trickle/markov.hpp"
#include "trickle/series.hpp"

namespace trickle {

// ---------------------------------------------------------------------------
// Holding time nu_j = eta + (1 - eta) * Beta(1, j) of state j.

/// E[nu_j^r] = sum_q C(r,q) eta^(r-q) (1-eta)^q q! j!/(q+j)!.
template <class Scalar = double>
Scalar step_moment(int j, Scalar eta, int r) {
  if (j < 1) throw std::invalid_argument("state must be >= 1");
  Scalar total(0);
  Scalar binom(1);       // C(r, q)
  Scalar beta_moment(1); // E[B^q]
  for (int q = 0; q <= r; ++q) {
    if (q > 0) {
      binom = binom * Scalar(r - q + 1) / Scalar(q);
      beta_moment = beta_moment * Scalar(q) / Scalar(j + q);
    }
    total += binom * std::pow(eta, r - q) * std::pow(Scalar(1) - eta, q) * beta_moment;
  }
  return total;
}

/// MGF of nu_j as a series in s: coefficient r is E[nu_j^r]/r!.
template <class Scalar = double>
TruncatedSeries<Scalar> step_mgf_series(int j, Scalar eta, int order) {
  TruncatedSeries<Scalar> out(order);
  Scalar factorial(1);
  for (int r = 0; r <= order; ++r) {
    if (r > 0) factorial *= Scalar(r);
    out(r) = step_moment<Scalar>(j, eta, r) / factorial;
  }
  return out;
}

/// E[exp(s nu_j)] for real s, as e^(s eta) j I_j(s(1-eta)) with
/// I_j(l) = int_0^1 e^(l x) (1-x)^(j-1) dx. Uses the integration-by-parts
/// recursion where it is forward-stable (|l| >= j) and a positive-term
/// series otherwise.
inline double step_mgf(int j, double eta, double s) {
  if (j < 1) throw std::invalid_argument("state must be >= 1");
  if (s == 0.0) return 1.0;
  const double lambda = s * (1.0 - eta);
  double integral;
  if (lambda == 0.0) {
    integral = 1.0 / j;
  } else if (std::abs(lambda) >= j) {
    integral = std::expm1(lambda) / lambda;
    for (int m = 2; m <= j; ++m) integral = ((m - 1) * integral - 1.0) / lambda;
  } else if (lambda > 0.0) {
    // sum_q l^q (j-1)!/(q+j)!
    double term = 1.0 / j;
    integral = term;
    for (int q = 0; term > 1e-18 * integral; ++q) {
      term *= lambda / (q + j + 1);
      integral += term;
    }
  } else {
    // e^l sum_q m^q/(q! (q+j)), m = -l
    const double mu = -lambda;
    double power = 1.0;
    double sum = 1.0 / j;
    for (int q = 1;; ++q) {
      power *= mu / q;
      const double term = power / (q + j);
      sum += term;
      if (term < 1e-18 * sum && q > mu) break;
    }
    integral = std::exp(lambda) * sum;
  }
  return std::exp(s * eta) * j * integral;
}

/// Holding-time MGF of one state: closed form for real s plus its series.
struct StepTimeMGF {
  int j = 1;
  double eta = 0;
  TruncatedSeries<double> series;

  StepTimeMGF(int state, double eta_, int order)
      : j(state), eta(eta_), series(step_mgf_series<double>(state, eta_, order)) {}

  double operator()(double s) const { return step_mgf(j, eta, s); }
};

// ---------------------------------------------------------------------------
// First-passage generating functions.

enum class PassageMode { hop, delay };

/// Table of G_{i,target}, i = 1..R, for one target state.
/// Hop mode: variable 0 marks updated nodes, variable 1 marks transitions.
/// Delay mode: variable 0 marks updated nodes, variable 1 is the MGF argument s.
template <class Scalar = double>
struct FirstPassageGF {
  int R = 1;
  int target = 1;
  PassageMode mode = PassageMode::hop;
  std::vector<TruncatedSeries<Scalar>> table;

  const TruncatedSeries<Scalar>& from(int i) const { return table.at(i - 1); }
};

namespace detail {

/// Neumann iteration of G_i = sum_{k != j} p_ik z^k w_i G_k + p_ij z^j w_i,
/// where w_i is the per-transition weight series. Each sweep adds at least
/// one updated node, so `sweeps` = node truncation + 1 is exact.
template <class Scalar, class Weight>
std::vector<TruncatedSeries<Scalar>> solve_passage(const matrix_t<Scalar>& P, int target,
                                                   const TruncatedSeries<Scalar>& shape,
                                                   int sweeps, Weight&& weighted) {
  const int R = static_cast<int>(P.rows());
  std::vector<TruncatedSeries<Scalar>> G(R, TruncatedSeries<Scalar>::like(shape));
  const auto unit = TruncatedSeries<Scalar>::constant_like(shape, Scalar(1));
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    std::vector<TruncatedSeries<Scalar>> next(R, TruncatedSeries<Scalar>::like(shape));
    for (int i = 1; i <= R; ++i) {
      auto& acc = next[i - 1];
      for (int k = 1; k <= R; ++k) {
        const Scalar p = P(i - 1, k - 1);
        if (p == Scalar(0)) continue;
        const auto& continuation = (k == target) ? unit : G[k - 1];
        acc += weighted(i, continuation).shifted(k, 0, p);
      }
    }
    G = std::move(next);
  }
  return G;
}

}  // namespace detail

/// Solves the hop first-passage system for every target state.
template <class Scalar = double>
std::vector<FirstPassageGF<Scalar>> solve_hop_system(int R, int n_max, int m_max) {
  if (n_max < 1 || m_max < 1) throw std::invalid_argument("truncation orders must be >= 1");
  const matrix_t<Scalar> P = transition_matrix<Scalar>(R);
  const TruncatedSeries<Scalar> shape(n_max, m_max);
  const auto step = [](int, const TruncatedSeries<Scalar>& g) { return g.shifted(0, 1); };
  std::vector<FirstPassageGF<Scalar>> out;
  out.reserve(R);
  for (int j = 1; j <= R; ++j)
    out.push_back({R, j, PassageMode::hop,
                   detail::solve_passage<Scalar>(P, j, shape, std::min(n_max, m_max) + 1, step)});
  return out;
}

/// Solves the delay first-passage system: transitions out of state i carry
/// the holding-time MGF of state i, truncated at s^order.
template <class Scalar = double>
std::vector<FirstPassageGF<Scalar>> solve_delay_system(int R, Scalar eta, int n_max, int order) {
  if (n_max < 1 || order < 1) throw std::invalid_argument("truncation orders must be >= 1");
  const matrix_t<Scalar> P = transition_matrix<Scalar>(R);
  const TruncatedSeries<Scalar> shape(n_max, order);
  std::vector<TruncatedSeries<Scalar>> holding;
  for (int i = 1; i <= R; ++i)
    holding.push_back(step_mgf_series<Scalar>(i, eta, order).transposed().resized(n_max, order));
  const auto step = [&holding](int i, const TruncatedSeries<Scalar>& g) {
    return holding[i - 1] * g;
  };
  std::vector<FirstPassageGF<Scalar>> out;
  out.reserve(R);
  for (int j = 1; j <= R; ++j)
    out.push_back({R, j, PassageMode::delay,
                   detail::solve_passage<Scalar>(P, j, shape, n_max + 1, step)});
  return out;
}

/// Bivariate hop-count generating function: coefficient (m, n) is
/// P[H(n) = m]. Variable 0 marks hops, variable 1 marks n.
template <class Scalar = double>
TruncatedSeries<Scalar> hop_count_gf(int R, int n_max, int m_max) {
  const auto systems = solve_hop_system<Scalar>(R, n_max, m_max);
  const TruncatedSeries<Scalar> shape(m_max, n_max);
  const auto one = TruncatedSeries<Scalar>::constant_like(shape, Scalar(1));
  const auto z1 = TruncatedSeries<Scalar>::monomial_like(shape, 1, 0, Scalar(1));
  const auto z2 = TruncatedSeries<Scalar>::monomial_like(shape, 0, 1, Scalar(1));

  auto inner = one;
  for (int j = 1; j <= R; ++j) {
    const auto first = systems[j - 1].from(1).transposed();
    const auto loop = systems[j - 1].from(j).transposed();
    inner += first * geometric(loop);
  }
  const auto tail = geometric(z2);
  return (z1 - one) * (z2 * tail) * inner + tail;
}

/// Bivariate delay generating function: coefficient (n, r) times r! is
/// E[T(n)^r]. Variable 0 marks n, variable 1 is s.
template <class Scalar = double>
TruncatedSeries<Scalar> delay_mgf_gf(int R, Scalar eta, int n_max, int order) {
  const auto systems = solve_delay_system<Scalar>(R, eta, n_max, order);
  const TruncatedSeries<Scalar> shape(n_max, order);
  const auto one = TruncatedSeries<Scalar>::constant_like(shape, Scalar(1));
  const auto z = TruncatedSeries<Scalar>::monomial_like(shape, 1, 0, Scalar(1));
  const auto holding = [&](int j) {
    return step_mgf_series<Scalar>(j, eta, order).transposed().resized(n_max, order);
  };

  auto inner = one - holding(1);
  for (int j = 1; j <= R; ++j) {
    const auto& first = systems[j - 1].from(1);
    const auto& loop = systems[j - 1].from(j);
    inner += (one - holding(j)) * first * geometric(loop);
  }
  const auto tail = geometric(z);
  // z/(z-1) = -z/(1-z)
  return -(z * tail) * inner + tail;
}

/// P[H(n) = m] for m = 0..m_max. The hop truncation starts at `m_max`
/// (0 picks a default) and doubles until the missing mass is below 1e-12 or
/// `m_cap` (0 means n) is reached.
template <class Scalar = double>
std::vector<Scalar> hop_pmf_gf(int R, int n, int m_max = 0, int m_cap = 0) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (m_cap <= 0) m_cap = n;
  int m = m_max > 0 ? m_max : std::max(1, 2 * n / (R + 1) + 2);
  m = std::min(m, m_cap);
  for (;;) {
    const auto gf = hop_count_gf<Scalar>(R, n, m);
    std::vector<Scalar> pmf(m + 1);
    Scalar mass(0);
    for (int k = 0; k <= m; ++k) {
      pmf[k] = gf(k, n);
      mass += pmf[k];
    }
    const Scalar deficit = Scalar(1) - mass;
    if (std::abs(static_cast<double>(deficit)) < 1e-12) {
      while (pmf.size() > 1 && pmf.back() == Scalar(0)) pmf.pop_back();
      return pmf;
    }
    if (m >= m_cap)
      throw truncation_insufficient("hop truncation " + std::to_string(m) + " leaves mass " +
                                    std::to_string(static_cast<double>(deficit)));
    m = std::min(2 * m, m_cap);
  }
}

/// pmf of H(n) for every n = 0..n_max from a single expansion.
template <class Scalar = double>
std::vector<std::vector<Scalar>> hop_pmf_table_gf(int R, int n_max) {
  const auto gf = hop_count_gf<Scalar>(R, n_max, n_max);
  std::vector<std::vector<Scalar>> out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    out[n].assign(n + 1, Scalar(0));
    for (int m = 0; m <= n; ++m) out[n][m] = gf(m, n);
  }
  return out;
}

/// Raw moments E[T(n)^r], r = 0..order.
struct DelayMoments {
  int n = 0;
  std::vector<double> raw;

  double mean() const { return raw.at(1); }
  double variance() const { return raw.at(2) - raw.at(1) * raw.at(1); }
};

template <class Scalar = double>
std::vector<DelayMoments> delay_moments_table_gf(int R, Scalar eta, int n_max, int order = 2) {
  if (order < 1) throw std::invalid_argument("moment order must be >= 1");
  const auto gf = delay_mgf_gf<Scalar>(R, eta, n_max, order);
  std::vector<DelayMoments> out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    if (std::abs(static_cast<double>(gf(n, 0)) - 1.0) > 1e-9)
      throw truncation_insufficient("delay MGF at s = 0 is " +
                                    std::to_string(static_cast<double>(gf(n, 0))) + " for n = " +
                                    std::to_string(n));
    out[n].n = n;
    double factorial = 1.0;
    for (int r = 0; r <= order; ++r) {
      if (r > 0) factorial *= r;
      out[n].raw.push_back(static_cast<double>(gf(n, r)) * factorial);
    }
  }
  return out;
}

template <class Scalar = double>
DelayMoments delay_moments_gf(int R, Scalar eta, int n, int order = 2) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return delay_moments_table_gf<Scalar>(R, eta, n, order).back();
}

}  // namespace trickle
