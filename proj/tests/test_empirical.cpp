#include <doctest.h>

#include "trickle/empirical.hpp"
#include "trickle/random.hpp"

using namespace trickle;

TEST_CASE("summary statistics") {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto s = summarize(std::span<const double>(xs));
  CHECK(s.count == 4);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)));
  const std::vector<int> ks{2, 2, 2};
  CHECK(summarize(std::span<const int>(ks)).variance == 0.0);
  CHECK(summarize(std::span<const double>()).count == 0);
}

TEST_CASE("KS of true normal draws") {
  random_engine rng(99);
  std::normal_distribution<double> normal;
  std::vector<double> xs(10000);
  for (double& x : xs) x = normal(rng);
  const double d = ks_distance(xs, {0.0, 1.0});
  CHECK(d < 0.02);
  CHECK(ks_pvalue(d, xs.size()) > 0.001);
  // misstandardized
  CHECK(ks_distance(xs, {0.5, 1.0}) > 0.15);
}

TEST_CASE("KS degenerate cases") {
  const std::vector<double> constant(100, 3.0);
  CHECK(ks_distance(constant, {3.0, 1.0}) >= 0.5);
  CHECK_THROWS_AS(ks_distance(constant, {3.0, 0.0}), degenerate_input);
  CHECK_THROWS_AS(ks_distance(std::vector<double>{}, {0.0, 1.0}), degenerate_input);
}

TEST_CASE("KS p-value is monotone") {
  CHECK(ks_pvalue(0.001, 1000) == doctest::Approx(1.0));
  CHECK(ks_pvalue(0.05, 1000) < ks_pvalue(0.03, 1000));
  CHECK(ks_pvalue(0.2, 1000) < 1e-10);
}

TEST_CASE("long-run variance of an AR(1) path") {
  random_engine rng(4);
  std::normal_distribution<double> normal;
  const double phi = -0.5;
  std::vector<double> xs(400000);
  double x = 0;
  for (double& v : xs) v = x = phi * x + normal(rng);
  // sigma^2 / (1 - phi)^2
  CHECK(long_run_variance(xs, 30) == doctest::Approx(1.0 / 2.25).epsilon(0.03));
  CHECK_THROWS_AS(long_run_variance(std::vector<double>(5, 1.0), 10), degenerate_input);
}

TEST_CASE("histogram bins and density") {
  const std::vector<double> xs{0.0, 0.1, 0.5, 0.99, 1.0, 2.0};
  const auto h = histogram(xs, 2, 0.0, 1.0);
  CHECK(h.counts[0] == 2);
  CHECK(h.counts[1] == 3);
  CHECK(h.total == 6);
  CHECK(h.density(1) == doctest::Approx(3.0 / (6 * 0.5)));
  CHECK_THROWS_AS(histogram(xs, 2, 1.0, 1.0), degenerate_input);
}
