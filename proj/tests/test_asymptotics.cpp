#include <doctest.h>

#include "oracles.hpp"
#include "trickle/asymptotics.hpp"

using namespace trickle;

TEST_CASE("harmonic numbers") {
  CHECK(harmonic_number(1) == 1.0);
  CHECK(harmonic_number(4) == doctest::Approx(25.0 / 12.0));
}

TEST_CASE("first moments against the stationary mixture") {
  for (int R : {1, 2, 5, 9}) {
    const auto f = oracles::chain_functions(transition_matrix<double>(R), 0.3);
    double mu_u = 0, mu_t = 0;
    for (int i = 0; i < R; ++i) {
      mu_u += f.pi[i] * f.u[i];
      mu_t += f.pi[i] * f.c[i];
    }
    CHECK(mean_update_size(R) == doctest::Approx(mu_u).epsilon(1e-12));
    CHECK(mean_inter_transmission(R, 0.3) == doctest::Approx(mu_t).epsilon(1e-12));
  }
}

TEST_CASE("frozen rates") {
  CHECK(mean_update_size(5) == doctest::Approx(11.0 / 3.0));
  CHECK(delay_rate(5, 0.0) == doctest::Approx(71.0 / 1100.0).epsilon(1e-14));
  CHECK(delay_rate(5, 0.5) == doctest::Approx(371.0 / 2200.0).epsilon(1e-14));
  CHECK(hop_rate(5) == doctest::Approx(3.0 / 11.0));
}

TEST_CASE("mean inter-transmission time increases with eta") {
  for (int R : {1, 3, 10, 30}) {
    double prev = mean_inter_transmission(R, 0.0);
    for (int i = 1; i <= 20; ++i) {
      const double cur = mean_inter_transmission(R, i / 20.0);
      CHECK(cur > prev);
      prev = cur;
    }
    CHECK(mean_inter_transmission(R, 1.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("second-order quantities against brute-force lag sums") {
  for (int R : {1, 2, 5, 10}) {
    const auto P = transition_matrix<double>(R);
    for (double eta : {0.0, 0.25, 0.5, 0.9}) {
      CAPTURE(R);
      CAPTURE(eta);
      const auto f = oracles::chain_functions(P, eta);
      double second = 0, mean = 0;
      for (int i = 0; i < R; ++i) {
        second += f.pi[i] * (oracles::step_var(i + 1, eta) + f.c[i] * f.c[i]);
        mean += f.pi[i] * f.c[i];
      }
      CHECK(var_inter_transmission(R, eta) ==
            doctest::Approx(second - mean * mean).epsilon(1e-10).scale(1e-14));
      CHECK(cov_step_update(R, eta) ==
            doctest::Approx(oracles::lagged_cov(P, f.pi, f.c, f.u, 0)).epsilon(1e-10).scale(1e-14));
      CHECK(delta_cross(R, eta) ==
            doctest::Approx(oracles::delta_bruteforce(P, eta, 80)).epsilon(1e-9).scale(1e-14));
      const auto stats = sigma_T_sq(R, eta);
      CHECK(stats.gamma_theta_sq ==
            doctest::Approx(oracles::gamma_theta_sq_bruteforce(P, eta, 80)).epsilon(1e-9).scale(1e-14));
    }
  }
}

TEST_CASE("gamma_U^2 is the long-run variance of the update sizes") {
  for (int R : {2, 7}) {
    double total = cov_update_sizes<double>(R, 0);
    for (int j = 1; j < 80; ++j) total += 2 * cov_update_sizes<double>(R, j);
    CHECK(gamma_U_sq(R) == doctest::Approx(total));
    CHECK(sigma_H_sq(R) == doctest::Approx(gamma_U_sq(R) / std::pow(mean_update_size(R), 3)));
  }
}

TEST_CASE("frozen asymptotic variances") {
  auto s = sigma_T_sq(5, 0.0);
  CHECK(s.sigma_T_sq == doctest::Approx(0.0122319444742586).epsilon(1e-9));
  CHECK(s.Delta == doctest::Approx(-0.0348148).epsilon(1e-5));
  s = sigma_T_sq(2, 0.0);
  CHECK(s.gamma_theta_sq == doctest::Approx(0.066872).epsilon(1e-5));
  CHECK(s.Delta == doctest::Approx(-0.012346).epsilon(1e-4));
  CHECK(s.sigma_T_sq == doctest::Approx(0.046).epsilon(1e-3));
  CHECK(s.Z.rows() == 2);
  CHECK(s.M(1, 1) == doctest::Approx(0.5 / 3.0));
}

TEST_CASE("eta = 1 removes all timing randomness") {
  const auto s = sigma_T_sq(6, 1.0);
  CHECK(s.mu_theta == doctest::Approx(1.0));
  CHECK(s.gamma_theta_sq == doctest::Approx(0.0).scale(1.0));
  CHECK(s.Delta == 0.0);
  // T = H exactly, so sigma_T^2 = sigma_H^2
  CHECK(s.sigma_T_sq == doctest::Approx(s.sigma_H_sq));
}

TEST_CASE("normal approximation scales with n") {
  const auto a = normal_approx(5, 0.5, 250);
  CHECK(a.mean_T == doctest::Approx(250 * 371.0 / 2200.0));
  CHECK(a.mean_H == doctest::Approx(250 * 3.0 / 11.0));
  const auto b = normal_approx(5, 0.5, 1000);
  CHECK(b.std_T == doctest::Approx(2 * a.std_T));
  CHECK_THROWS_AS(normal_approx(5, 0.5, 0), std::invalid_argument);
}

TEST_CASE("delay-variance minimizers") {
  CHECK(argmin_delay_variance(5).eta == doctest::Approx(0.568).epsilon(0.002));
  CHECK(argmin_delay_variance(10).eta == doctest::Approx(0.2612).epsilon(0.005));
  CHECK(argmin_delay_variance(30).eta == 0.0);
}

TEST_CASE("eta domain") {
  CHECK_THROWS_AS(sigma_T_sq(5, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(mean_inter_transmission(5, 1.1), std::invalid_argument);
}
