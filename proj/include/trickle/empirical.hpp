#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "trickle/errors.hpp"

namespace trickle {

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0;
  double variance = 0;  // unbiased
  double std_error = 0;
};

SampleSummary summarize(std::span<const double> xs);
SampleSummary summarize(std::span<const int> xs);

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Sup-distance between the empirical CDF of `samples` and `cdf`.
template <class Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  if (samples.empty()) throw degenerate_input("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double count = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / count - f, f - static_cast<double>(i) / count});
  }
  return d;
}

struct Standardization {
  double mean = 0;
  double std = 1;
};

/// KS distance of (x - mean)/std against the standard normal.
double ks_distance(std::span<const double> samples, Standardization standardization);

/// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
double ks_pvalue(double d, std::size_t count);

/// Long-run variance lim Var[sum x_i]/m estimated by the truncated
/// autocovariance sum c_0 + 2 sum_{l=1}^{max_lag} c_l.
double long_run_variance(std::span<const double> xs, int max_lag);

struct Histogram {
  double lo = 0;
  double width = 1;
  std::vector<std::size_t> counts;
  std::size_t total = 0;

  double density(std::size_t bin) const {
    return static_cast<double>(counts[bin]) / (static_cast<double>(total) * width);
  }
};

Histogram histogram(std::span<const double> xs, std::size_t bins, double lo, double hi);

}  // namespace trickle
