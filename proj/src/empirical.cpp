#include "trickle/empirical.hpp"

#include <numeric>
#include <stdexcept>

namespace trickle {

namespace {

template <class T>
SampleSummary summarize_impl(std::span<const T> xs) {
  SampleSummary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  // Welford; stable for long runs of nearly equal values
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t i = 0;
  for (const T x : xs) {
    ++i;
    const double delta = static_cast<double>(x) - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (static_cast<double>(x) - mean);
  }
  s.mean = mean;
  if (s.count > 1) {
    s.variance = m2 / static_cast<double>(s.count - 1);
    s.std_error = std::sqrt(s.variance / static_cast<double>(s.count));
  }
  return s;
}

}  // namespace

SampleSummary summarize(std::span<const double> xs) { return summarize_impl(xs); }
SampleSummary summarize(std::span<const int> xs) { return summarize_impl(xs); }

double ks_distance(std::span<const double> samples, Standardization st) {
  if (samples.empty()) throw degenerate_input("KS distance of an empty sample");
  if (!(st.std > 0.0) || !std::isfinite(st.std))
    throw degenerate_input("KS standardization needs a positive finite std");
  std::vector<double> z(samples.begin(), samples.end());
  for (double& x : z) x = (x - st.mean) / st.std;
  return ks_statistic(std::move(z), normal_cdf);
}

double ks_pvalue(double d, std::size_t count) {
  if (count == 0) throw degenerate_input("KS p-value needs a nonempty sample");
  const double root = std::sqrt(static_cast<double>(count));
  const double lambda = (root + 0.12 + 0.11 / root) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double long_run_variance(std::span<const double> xs, int max_lag) {
  if (max_lag < 0) throw std::invalid_argument("max_lag must be >= 0");
  const std::size_t m = xs.size();
  if (m <= static_cast<std::size_t>(max_lag) + 1)
    throw degenerate_input("series too short for the requested lag");
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m);
  double total = 0.0;
  for (int lag = 0; lag <= max_lag; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < m; ++i) c += (xs[i] - mean) * (xs[i + lag] - mean);
    c /= static_cast<double>(m);
    total += lag == 0 ? c : 2.0 * c;
  }
  return total;
}

Histogram histogram(std::span<const double> xs, std::size_t bins, double lo, double hi) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  if (!(hi > lo)) throw degenerate_input("histogram range is empty");
  Histogram h;
  h.lo = lo;
  h.width = (hi - lo) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  for (const double x : xs) {
    ++h.total;
    if (x < lo || x > hi) continue;
    const auto bin = std::min(bins - 1, static_cast<std::size_t>((x - lo) / h.width));
    ++h.counts[bin];
  }
  return h;
}

}  // namespace trickle
