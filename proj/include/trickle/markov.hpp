#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "trickle/errors.hpp"

namespace trickle {

template <class Scalar>
using matrix_t = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using vector_t = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using row_vector_t = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Update-size chain {U_m} on states 1..R. Index i-1 holds state i.
template <class Scalar = double>
struct MarkovModel {
  int R = 1;
  matrix_t<Scalar> P;
  row_vector_t<Scalar> pi;
};

inline void require_range(int R) {
  if (R < 1) throw std::invalid_argument("transmission range R must be >= 1");
}

/// p_ij = 1/i for R - i < j <= R. From state i the broadcaster is uniform
/// among the i freshest nodes, so the next update size is uniform on
/// {R - i + 1, ..., R}.
template <class Scalar = double>
matrix_t<Scalar> transition_matrix(int R) {
  require_range(R);
  matrix_t<Scalar> P = matrix_t<Scalar>::Zero(R, R);
  for (int i = 1; i <= R; ++i)
    for (int j = R - i + 1; j <= R; ++j) P(i - 1, j - 1) = Scalar(1) / Scalar(i);
  return P;
}

template <class Scalar = double>
row_vector_t<Scalar> stationary_closed_form(int R) {
  require_range(R);
  row_vector_t<Scalar> pi(R);
  for (int j = 1; j <= R; ++j) pi(j - 1) = Scalar(2 * j) / Scalar(R * (R + 1));
  return pi;
}

/// Solves pi (P - I) = 0 with sum(pi) = 1 by replacing one balance equation
/// with the normalization.
template <class Derived>
row_vector_t<typename Derived::Scalar> solve_stationary(const Eigen::MatrixBase<Derived>& P) {
  using Scalar = typename Derived::Scalar;
  const auto R = P.rows();
  matrix_t<Scalar> A = P.transpose() - matrix_t<Scalar>::Identity(R, R);
  A.row(R - 1).setOnes();
  vector_t<Scalar> rhs = vector_t<Scalar>::Zero(R);
  rhs(R - 1) = Scalar(1);
  Eigen::FullPivLU<matrix_t<Scalar>> lu(A);
  if (!lu.isInvertible()) throw singular_matrix("stationary system is singular");
  return lu.solve(rhs).transpose();
}

template <class Scalar = double>
MarkovModel<Scalar> build_markov(int R) {
  MarkovModel<Scalar> model;
  model.R = R;
  model.P = transition_matrix<Scalar>(R);
  model.pi = solve_stationary(model.P);
  const Scalar mismatch = (model.pi - stationary_closed_form<Scalar>(R)).cwiseAbs().maxCoeff();
  if (mismatch > Scalar(1e-12))
    throw std::logic_error("stationary vector deviates from 2j/(R(R+1)) by " +
                           std::to_string(static_cast<double>(mismatch)));
  return model;
}

/// Largest |pi_i p_ij - pi_j p_ji|.
template <class Scalar>
Scalar detailed_balance_residual(const MarkovModel<Scalar>& model) {
  const matrix_t<Scalar> flow = model.pi.transpose().asDiagonal() * model.P;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

/// State values (1, ..., R) as a column vector.
template <class Scalar = double>
vector_t<Scalar> update_sizes(int R) {
  return vector_t<Scalar>::LinSpaced(R, Scalar(1), Scalar(R));
}

/// Cov[U_0, U_j] of the stationary chain, (-1/2)^j (R^2 + R - 2) / 18.
template <class Scalar = double>
Scalar cov_update_sizes(int R, int j) {
  require_range(R);
  if (j < 0) throw std::invalid_argument("lag j must be >= 0");
  const Scalar r = Scalar(R);
  return std::pow(Scalar(-0.5), j) * (r * r + r - Scalar(2)) / Scalar(18);
}

/// Same covariance through P^j, on centered state values to avoid
/// cancellation: pi diag(u - mu) P^j (u - mu).
template <class Scalar>
Scalar cov_update_sizes_matrix(const MarkovModel<Scalar>& model, int j) {
  if (j < 0) throw std::invalid_argument("lag j must be >= 0");
  const vector_t<Scalar> u = update_sizes<Scalar>(model.R);
  const Scalar mu = model.pi * u;
  const vector_t<Scalar> centered = u.array() - mu;
  vector_t<Scalar> propagated = centered;
  for (int step = 0; step < j; ++step) propagated = model.P * propagated;
  return (model.pi.array() * centered.transpose().array() * propagated.transpose().array()).sum();
}

}  // namespace trickle
