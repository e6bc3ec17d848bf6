#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trickle/markov.hpp"

namespace trickle {

/// sum_{j=1}^{m} 1/j by direct summation.
template <class Scalar = double>
Scalar harmonic_number(int m) {
  Scalar h(0);
  for (int j = m; j >= 1; --j) h += Scalar(1) / Scalar(j);
  return h;
}

inline void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
}

/// E[theta | U = i]: the minimum of i timers uniform on [eta, 1].
template <class Scalar = double>
Scalar conditional_step_mean(int i, Scalar eta) {
  return eta + (Scalar(1) - eta) / Scalar(i + 1);
}

template <class Scalar = double>
Scalar mean_update_size(int R) {
  require_range(R);
  return Scalar(2 * R + 1) / Scalar(3);
}

template <class Scalar = double>
Scalar mean_inter_transmission(int R, Scalar eta) {
  require_range(R);
  require_eta(static_cast<double>(eta));
  const Scalar r(R);
  return eta + Scalar(2) * (Scalar(1) - eta) * (r + Scalar(1) - harmonic_number<Scalar>(R + 1)) /
                   (r * (r + Scalar(1)));
}

/// lim E[H(n)]/n.
template <class Scalar = double>
Scalar hop_rate(int R) {
  return Scalar(1) / mean_update_size<Scalar>(R);
}

/// lim E[T(n)]/n.
template <class Scalar = double>
Scalar delay_rate(int R, Scalar eta) {
  return mean_inter_transmission<Scalar>(R, eta) / mean_update_size<Scalar>(R);
}

template <class Scalar = double>
Scalar gamma_U_sq(int R) {
  require_range(R);
  const Scalar r(R);
  return (r * r + r - Scalar(2)) / Scalar(54);
}

template <class Scalar = double>
Scalar sigma_H_sq(int R) {
  require_range(R);
  const Scalar r(R);
  return (r * r + r - Scalar(2)) /
         (Scalar(16) * r * r * r + Scalar(24) * r * r + Scalar(12) * r + Scalar(2));
}

/// Stationary Var[theta_1].
template <class Scalar = double>
Scalar var_inter_transmission(int R, Scalar eta) {
  require_range(R);
  const Scalar r(R);
  const Scalar h = harmonic_number<Scalar>(R + 1);
  const Scalar inner = (Scalar(2) + r) / (Scalar(2) * r) - h / (r * (Scalar(1) + r));
  const Scalar spread = Scalar(1) - eta;
  return Scalar(4) * spread * spread *
         ((Scalar(6) + r) / (Scalar(8) + Scalar(4) * r) - inner * inner);
}

/// Stationary Cov[theta_1, U_0].
template <class Scalar = double>
Scalar cov_step_update(int R, Scalar eta) {
  require_range(R);
  const Scalar r(R);
  const Scalar h = harmonic_number<Scalar>(R + 1);
  return (Scalar(1) - eta) * ((Scalar(4) * r + Scalar(8)) * h - (r * r + Scalar(9) * r + Scalar(8))) /
         (Scalar(3) * r * r + Scalar(3) * r);
}

/// Cross term Cov[theta_1,U_0] + 2 sum_j Cov[theta_1,U_j].
template <class Scalar = double>
Scalar delta_cross(int R, Scalar eta) {
  require_range(R);
  const Scalar r(R);
  const Scalar h = harmonic_number<Scalar>(R + 1);
  return (Scalar(1) - eta) * ((Scalar(4) * r + Scalar(8)) * h - (r * r + Scalar(9) * r + Scalar(8))) /
         (Scalar(9) * r * r + Scalar(9) * r);
}

/// Z = (I - P + 1 pi)^{-1}.
template <class Scalar>
matrix_t<Scalar> fundamental_matrix(const MarkovModel<Scalar>& model) {
  const int R = model.R;
  const matrix_t<Scalar> A = matrix_t<Scalar>::Identity(R, R) - model.P +
                             vector_t<Scalar>::Ones(R) * model.pi;
  Eigen::FullPivLU<matrix_t<Scalar>> lu(A);
  if (!lu.isInvertible()) throw singular_matrix("I - P + 1 pi is singular");
  return lu.inverse();
}

/// M = [p_ij (eta + (1 - eta)/(i + 1))].
template <class Scalar>
matrix_t<Scalar> step_reward_matrix(const MarkovModel<Scalar>& model, Scalar eta) {
  matrix_t<Scalar> M = model.P;
  for (int i = 1; i <= model.R; ++i) M.row(i - 1) *= conditional_step_mean<Scalar>(i, eta);
  return M;
}

template <class Scalar = double>
struct AsymptoticStats {
  int R = 1;
  Scalar eta = 0;
  Scalar mu_U = 0;
  Scalar mu_theta = 0;
  Scalar gamma_U_sq = 0;
  Scalar gamma_theta_sq = 0;
  Scalar Delta = 0;
  Scalar sigma_H_sq = 0;
  Scalar sigma_T_sq = 0;
  matrix_t<Scalar> Z;
  matrix_t<Scalar> M;
};

/// Every long-run quantity of the renewal model for (R, eta). sigma_T_sq is
/// assembled from gamma_theta_sq = Var[theta_1] + 2 pi M Z M 1 - 2 mu_theta^2.
template <class Scalar = double>
AsymptoticStats<Scalar> sigma_T_sq(int R, Scalar eta) {
  require_eta(static_cast<double>(eta));
  const MarkovModel<Scalar> model = build_markov<Scalar>(R);

  AsymptoticStats<Scalar> s;
  s.R = R;
  s.eta = eta;
  s.mu_U = mean_update_size<Scalar>(R);
  s.mu_theta = mean_inter_transmission<Scalar>(R, eta);
  s.gamma_U_sq = gamma_U_sq<Scalar>(R);
  s.sigma_H_sq = sigma_H_sq<Scalar>(R);
  s.Z = fundamental_matrix(model);
  s.M = step_reward_matrix(model, eta);
  s.Delta = delta_cross<Scalar>(R, eta);

  const Scalar pi_MZM1 = model.pi * s.M * s.Z * s.M * vector_t<Scalar>::Ones(R);
  s.gamma_theta_sq = var_inter_transmission<Scalar>(R, eta) + Scalar(2) * pi_MZM1 -
                     Scalar(2) * s.mu_theta * s.mu_theta;
  s.sigma_T_sq = (s.mu_theta * s.mu_theta * s.gamma_U_sq + s.mu_U * s.mu_U * s.gamma_theta_sq -
                  Scalar(2) * s.mu_U * s.mu_theta * s.Delta) /
                 (s.mu_U * s.mu_U * s.mu_U);
  return s;
}

struct NormalApprox {
  double mean_H = 0;
  double std_H = 0;
  double mean_T = 0;
  double std_T = 0;
};

inline NormalApprox normal_approx(int R, double eta, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const auto stats = sigma_T_sq<double>(R, eta);
  const double root_n = std::sqrt(static_cast<double>(n));
  return {n / stats.mu_U, std::sqrt(stats.sigma_H_sq) * root_n, n * stats.mu_theta / stats.mu_U,
          std::sqrt(std::max(stats.sigma_T_sq, 0.0)) * root_n};
}

struct EtaMinimum {
  double eta = 0;
  double sigma_T_sq = 0;
};

/// Minimizer of sigma_T^2 over eta in [0, 1]: grid scan to bracket, then
/// golden-section refinement. A boundary minimum is returned exactly.
inline EtaMinimum argmin_delay_variance(int R, int grid_points = 101, double tol = 1e-4) {
  if (grid_points < 3) throw std::invalid_argument("grid needs at least 3 points");
  const auto f = [R](double eta) { return sigma_T_sq<double>(R, eta).sigma_T_sq; };
  const double step = 1.0 / (grid_points - 1);

  int best = 0;
  double best_value = f(0.0);
  for (int i = 1; i < grid_points; ++i) {
    const double v = f(i * step);
    if (v < best_value) {
      best = i;
      best_value = v;
    }
  }

  double a = std::max(0, best - 1) * step;
  double b = std::min(grid_points - 1, best + 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  EtaMinimum result{0.5 * (a + b), f(0.5 * (a + b))};
  for (double edge : {0.0, 1.0}) {
    const double v = f(edge);
    if (v <= result.sigma_T_sq) result = {edge, v};
  }
  return result;
}

}  // namespace trickle
