#pragma once

#include <algorithm>
#include <stdexcept>

#include <Eigen/Core>

namespace trickle {

/// Formal power series in one or two variables, truncated per variable:
/// coefficients of x^a y^b are kept for a <= degree(0), b <= degree(1).
/// Every retained coefficient of a sum, product or inverse is exact, since
/// no dropped term can contribute to a lower multi-degree.
template <class Scalar = double>
class TruncatedSeries {
 public:
  using coeff_array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  TruncatedSeries() : TruncatedSeries(0) {}

  explicit TruncatedSeries(int degree0) : variables_(1), coeffs_(coeff_array::Zero(degree0 + 1, 1)) {
    check_degree(degree0);
  }

  TruncatedSeries(int degree0, int degree1)
      : variables_(2), coeffs_(coeff_array::Zero(degree0 + 1, degree1 + 1)) {
    check_degree(degree0);
    check_degree(degree1);
  }

  static TruncatedSeries like(const TruncatedSeries& shape) {
    TruncatedSeries out = shape;
    out.coeffs_.setZero();
    return out;
  }

  static TruncatedSeries constant_like(const TruncatedSeries& shape, Scalar value) {
    TruncatedSeries out = like(shape);
    out.coeffs_(0, 0) = value;
    return out;
  }

  /// value * x^e0 y^e1 in the shape of `shape` (zero if beyond truncation).
  static TruncatedSeries monomial_like(const TruncatedSeries& shape, int e0, int e1, Scalar value) {
    TruncatedSeries out = like(shape);
    if (e0 <= out.degree(0) && e1 <= out.degree(1)) out.coeffs_(e0, e1) = value;
    return out;
  }

  int variables() const { return variables_; }
  int degree(int var) const {
    return static_cast<int>(var == 0 ? coeffs_.rows() : coeffs_.cols()) - 1;
  }

  Scalar& operator()(int a, int b = 0) { return coeffs_(a, b); }
  const Scalar& operator()(int a, int b = 0) const { return coeffs_(a, b); }

  const coeff_array& coeffs() const { return coeffs_; }
  coeff_array& coeffs() { return coeffs_; }

  TruncatedSeries& operator+=(const TruncatedSeries& rhs) {
    check_shape(rhs);
    coeffs_ += rhs.coeffs_;
    return *this;
  }

  TruncatedSeries& operator-=(const TruncatedSeries& rhs) {
    check_shape(rhs);
    coeffs_ -= rhs.coeffs_;
    return *this;
  }

  TruncatedSeries& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }

  TruncatedSeries& operator*=(const TruncatedSeries& rhs) {
    *this = *this * rhs;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries lhs, const TruncatedSeries& rhs) { return lhs += rhs; }
  friend TruncatedSeries operator-(TruncatedSeries lhs, const TruncatedSeries& rhs) { return lhs -= rhs; }
  friend TruncatedSeries operator*(TruncatedSeries lhs, Scalar s) { return lhs *= s; }
  friend TruncatedSeries operator*(Scalar s, TruncatedSeries rhs) { return rhs *= s; }
  friend TruncatedSeries operator-(TruncatedSeries s) {
    s.coeffs_ = -s.coeffs_;
    return s;
  }

  friend TruncatedSeries operator*(const TruncatedSeries& lhs, const TruncatedSeries& rhs) {
    lhs.check_shape(rhs);
    TruncatedSeries out = like(lhs);
    const auto rows = lhs.coeffs_.rows();
    const auto cols = lhs.coeffs_.cols();
    for (Eigen::Index a1 = 0; a1 < rows; ++a1)
      for (Eigen::Index b1 = 0; b1 < cols; ++b1) {
        const Scalar c = lhs.coeffs_(a1, b1);
        if (c == Scalar(0)) continue;
        for (Eigen::Index a2 = 0; a2 < rows - a1; ++a2)
          for (Eigen::Index b2 = 0; b2 < cols - b1; ++b2)
            out.coeffs_(a1 + a2, b1 + b2) += c * rhs.coeffs_(a2, b2);
      }
    return out;
  }

  /// value * x^e0 y^e1 * (*this), computed as a shift.
  TruncatedSeries shifted(int e0, int e1, Scalar value = Scalar(1)) const {
    TruncatedSeries out = like(*this);
    const auto rows = coeffs_.rows() - e0;
    const auto cols = coeffs_.cols() - e1;
    if (rows > 0 && cols > 0)
      out.coeffs_.block(e0, e1, rows, cols) = value * coeffs_.block(0, 0, rows, cols);
    return out;
  }

  /// Multiplicative inverse; requires a nonzero constant term.
  TruncatedSeries inverse() const {
    const Scalar c0 = coeffs_(0, 0);
    if (c0 == Scalar(0)) throw std::domain_error("series with zero constant term has no inverse");
    TruncatedSeries out = like(*this);
    const auto rows = coeffs_.rows();
    const auto cols = coeffs_.cols();
    for (Eigen::Index a = 0; a < rows; ++a)
      for (Eigen::Index b = 0; b < cols; ++b) {
        Scalar acc = (a == 0 && b == 0) ? Scalar(1) : Scalar(0);
        for (Eigen::Index i = 0; i <= a; ++i)
          for (Eigen::Index j = 0; j <= b; ++j) {
            if (i == 0 && j == 0) continue;
            acc -= coeffs_(i, j) * out.coeffs_(a - i, b - j);
          }
        out.coeffs_(a, b) = acc / c0;
      }
    return out;
  }

  /// Substitutes a value for the first variable, leaving a univariate series
  /// in the second.
  TruncatedSeries substitute_first(Scalar value) const {
    TruncatedSeries out(degree(1));
    Scalar power(1);
    for (Eigen::Index a = 0; a < coeffs_.rows(); ++a) {
      out.coeffs_.col(0) += power * coeffs_.row(a).transpose();
      power *= value;
    }
    return out;
  }

  /// Swaps the roles of the two variables.
  TruncatedSeries transposed() const {
    TruncatedSeries out(degree(1), degree(0));
    out.coeffs_ = coeffs_.transpose();
    return out;
  }

  /// Re-embeds into a (possibly smaller or larger) truncation shape.
  TruncatedSeries resized(int degree0, int degree1) const {
    TruncatedSeries out(degree0, degree1);
    const auto rows = std::min<Eigen::Index>(coeffs_.rows(), degree0 + 1);
    const auto cols = std::min<Eigen::Index>(coeffs_.cols(), degree1 + 1);
    out.coeffs_.block(0, 0, rows, cols) = coeffs_.block(0, 0, rows, cols);
    return out;
  }

 private:
  static void check_degree(int d) {
    if (d < 0) throw std::invalid_argument("truncation degree must be >= 0");
  }

  void check_shape(const TruncatedSeries& other) const {
    if (coeffs_.rows() != other.coeffs_.rows() || coeffs_.cols() != other.coeffs_.cols())
      throw std::invalid_argument("series truncation shapes differ");
  }

  int variables_;
  coeff_array coeffs_;
};

/// 1/(1 - s) for a series with zero constant term.
template <class Scalar>
TruncatedSeries<Scalar> geometric(const TruncatedSeries<Scalar>& s) {
  if (s(0, 0) != Scalar(0))
    throw std::domain_error("geometric expansion needs a zero constant term");
  return (TruncatedSeries<Scalar>::constant_like(s, Scalar(1)) - s).inverse();
}

}  // namespace trickle
