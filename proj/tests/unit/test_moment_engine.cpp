#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hardcore/errors.hpp"
#include "hardcore/experiments.hpp"
#include "hardcore/model_core.hpp"
#include "hardcore/moment_engine.hpp"
#include "hardcore/oracles.hpp"

using namespace hardcore;
using doctest::Approx;

TEST_CASE("region membership") {
  CHECK(in_region({0.2, 0.04, 0.12}));
  CHECK_FALSE(in_region({0.6, 0.0, 0.0}));
  CHECK_THROWS_WITH_AS(check_region({0.2, 0.1, 0.2}), doctest::Contains("alpha - gamma - epsilon"), DomainError);
  CHECK_THROWS_AS(check_region({0.4, 0.1, 0.15}), DomainError);
}

TEST_CASE("Phi and f") {
  CHECK(phi(0.0, 2.0, 5) == 0.0);
  CHECK(phi(0.25, 1.0, 3) == Approx(0.434911).epsilon(1e-6));
  for (double a : {0.05, 0.2, 0.4}) {
    for (double lam : {0.3, 1.0, 4.0}) {
      const int d = 7;
      CHECK(std::abs(f_point({a, a * a, a * (1 - 2 * a)}, lam, d) - 2 * phi(a, lam, d)) < 1e-12);
      CHECK(std::abs(f_point({a, a, 0.0}, lam, d) - (a * std::log(lam) + phi(a, lam, d))) < 1e-12);
    }
  }
  CHECK(identity_suite_max_error(100, 3) <= 1e-10);
}

TEST_CASE("epsilon bar") {
  CHECK(eps_bar(0.2, 0.05) == Approx(0.114589).epsilon(1e-6));
  CHECK(eps_bar(0.3, 0.3) == 0.0);
  for (double a : {0.01, 0.17, 0.35}) CHECK(std::abs(eps_bar(a, a * a) - a * (1 - 2 * a)) < 1e-15);
  for (double a : {0.1, 0.3}) CHECK(std::abs(df_deps({a, 0.3 * a, eps_bar(a, 0.3 * a)}, 10)) < 1e-12);
  const auto [stat, concave] = stationarity_suite(200, 3);
  CHECK(stat <= 1e-8);
  CHECK(concave);
  CHECK(g_value(0.2, 0.05, 1.0, 3) == Approx(f_point({0.2, 0.05, eps_bar(0.2, 0.05)}, 1.0, 3)));
}

TEST_CASE("alpha star") {
  for (int d : {3, 10, 100}) {
    double prev = 0.0;
    for (double lam : {0.01, 0.1, 1.0, 10.0}) {
      const auto s = alpha_star(lam, d);
      CHECK(s.residual <= 1e-12);
      CHECK(s.alpha > prev);
      prev = s.alpha;
      CHECK(std::abs(s.alpha - params_from_lambda(d, lam).alpha) < 1e-12);
      CHECK(s.gamma == Approx(s.alpha * s.alpha));
    }
  }
  const double r6 = std::abs(alpha_star(1.0, 1'000'000).alpha - std::log(1e6) / 1e6) / alpha_star(1.0, 1'000'000).alpha;
  const double r4 = std::abs(alpha_star(1.0, 10'000).alpha - std::log(1e4) / 1e4) / alpha_star(1.0, 10'000).alpha;
  CHECK(r6 < 0.25);
  CHECK(r6 < r4);
}

TEST_CASE("Hessian") {
  const auto h = hessian_f_analytic(0.1, 3);
  CHECK(h[1][2] == Approx(-300.0));
  for (int d : {5, 50}) {
    const auto s = alpha_star(0.5, d);
    const OverlapPoint p{s.alpha, s.gamma, s.epsilon};
    const auto a = hessian_f_analytic(s.alpha, d);
    const auto f = hessian_f_fd(p, 0.5, d);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(a[i][j] - f[i][j]) <= 1e-6 * std::abs(a[i][j]));
    for (double e : symmetric_eigenvalues(a)) CHECK(e < 0.0);
  }
  CHECK_THROWS_AS(hessian_f_fd({0.2, 0.0, 0.1}, 1.0, 3), DomainError);
}

TEST_CASE("global maximum report") {
  const auto r = verify_global_max(0.05, 50, 1.0 / 200);
  CHECK(r.negative_definite);
  CHECK(r.hessian_max_rel_diff < 1e-6);
  CHECK(r.grid_max <= r.f_star + 1e-12);
  CHECK(r.decay_c_min > 0.0);
  CHECK_THROWS_AS(verify_global_max(1.0, 50, 0.3), ArgumentError);
}

TEST_CASE("exact first and second moments against pairings") {
  CHECK(first_moment_rational(4, 1, Rational(1), 3) == Rational(32, 11));
  CHECK(first_moment_exact(4, 0.25, 1.0, 3) == Approx(32.0 / 11.0).epsilon(1e-13));
  CHECK(second_moment_sum_rational(4, 1, Rational(1), 3) == oracle::second_moment_by_pairings(4, 3, 1, Rational(1)));
  CHECK(std::exp(second_moment_sum_log(4, 1, 1.0, 3)) == Approx(104.0 / 11.0).epsilon(1e-13));
  for (const auto& o : feasible_overlaps(6, 2, 2)) {
    CHECK(second_moment_rational(6, 2, o.t, o.k, Rational(3, 2), 2) ==
          oracle::second_moment_term_by_pairings(6, 2, 2, o.t, o.k, Rational(3, 2)));
    CHECK(std::exp(second_moment_log(6, 2, o.t, o.k, 1.5, 2)) ==
          Approx(static_cast<double>(second_moment_rational(6, 2, o.t, o.k, Rational(3, 2), 2))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(first_moment_log(4, 2, 1.0, 3), DomainError);
  CHECK_THROWS_AS(first_moment_log(3, 1, 1.0, 3), ArgumentError);
}

TEST_CASE("singleton sets average to n lambda times the first-moment ratio") {
  // Each vertex alone is independent unless it carries a loop.
  for (int d : {2, 3}) {
    const int n = 4;
    const Rational brute = oracle::first_moment_by_pairings(n, d, 1, Rational(2));
    CHECK(brute == first_moment_rational(n, 1, Rational(2), d));
  }
}

TEST_CASE("punctured moments") {
  const int d = 3;
  PuncturedCensus c{2, 2, 0, 0, 0};
  check_census(c, d);
  CHECK_THROWS_AS(check_census({2, 2, 0, 3, 0}, d), ArgumentError);
  CHECK(chi(0, 1.0, d) == 1.0);
  CHECK(punctured_first_moment_rational(c, 1, Rational(1), d) == oracle::punctured_first_by_pairings(c, d, 1, Rational(1)));
  c.L1 = 1;
  CHECK(punctured_first_moment_rational(c, 1, Rational(1), d) == oracle::punctured_first_by_pairings(c, d, 1, Rational(1)));
  CHECK(punctured_second_moment_rational(c, 1, 0, 1, Rational(1), d) ==
        oracle::punctured_second_term_by_pairings(c, d, 1, 0, 1, Rational(1)));
  CHECK(std::exp(punctured_first_moment_log(c, 1, 1.0, d)) ==
        Approx(static_cast<double>(punctured_first_moment_rational(c, 1, Rational(1), d))).epsilon(1e-12));
}
