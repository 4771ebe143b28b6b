#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hardcore/errors.hpp"
#include "hardcore/model_core.hpp"
#include "hardcore/rng.hpp"

using namespace hardcore;
using doctest::Approx;

TEST_CASE("lambda and alpha conversions") {
  CHECK(lambda_of_alpha(3, 0.2) == Approx(16.0 / 27.0).epsilon(1e-15));
  CHECK(std::abs(params_from_lambda(3, 16.0 / 27.0).alpha - 0.2) < 1e-12);
  CHECK(params_from_alpha(5, 0.0).lambda == 0.0);
  CHECK_THROWS_AS(params_from_alpha(3, 0.5), DomainError);
  CHECK_THROWS_AS(params_from_lambda(3, -1.0), DomainError);
}

TEST_CASE("roundtrip over random degrees and densities") {
  Rng rng = make_stream(7, 0);
  std::uniform_int_distribution<int> ud(3, 100);
  std::uniform_real_distribution<double> ua(1e-4, 0.49);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int d = ud(rng);
    const double a = ua(rng);
    const double back = params_from_lambda(d, params_from_alpha(d, a).lambda).alpha;
    worst = std::max(worst, std::abs(back - a));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("kernel and derived constants") {
  const auto p = params_from_alpha(3, 0.2);
  const auto k = markov_kernel(p);
  const auto c = derived_constants(p);
  CHECK(k.p01 == Approx(0.25));
  CHECK(k.p00 == Approx(0.75));
  CHECK(k.p11 == 0.0);
  CHECK(k.p10 == 1.0);
  CHECK(c.theta == Approx(-0.25));
  CHECK(c.pi01 == Approx(4.0));
  CHECK(c.delta == Approx(3.0));
  CHECK(std::abs(c.delta - (c.pi01 - 1.0)) < 1e-14);

  const auto z = markov_kernel(params_from_alpha(4, 0.0));
  CHECK(z.p01 == 0.0);
  CHECK(z.p00 == 1.0);
}

TEST_CASE("kernel rows are stochastic and (alpha, 1-alpha) is stationary") {
  for (double a : {0.01, 0.1, 0.2, 0.33, 0.45}) {
    const auto k = markov_kernel(params_from_alpha(7, a));
    CHECK(std::abs(k.p00 + k.p01 - 1.0) < 1e-15);
    CHECK(std::abs(k.p10 + k.p11 - 1.0) < 1e-15);
    CHECK(std::abs(a * k.p11 + (1 - a) * k.p01 - a) < 1e-14);
    CHECK(std::abs(a * k.p10 + (1 - a) * k.p00 - (1 - a)) < 1e-14);
    CHECK(derived_constants(params_from_alpha(7, a)).theta < 0.0);
  }
}

TEST_CASE("threshold table") {
  const auto t = threshold_table(1000);
  CHECK(t.lambda_r_lower == Approx(8.559).epsilon(1e-3));
  CHECK(t.lambda_r_upper == Approx(129.7).epsilon(1e-3));
  CHECK(t.alpha_r_lower < t.alpha_r_upper);
  CHECK(t.martin_bound == Approx(std::exp(1.0) - 1.0));
  REQUIRE(t.lambda_c.has_value());
  CHECK(params_from_lambda(1000, *t.lambda_c).alpha == Approx(t.alpha_c).epsilon(1e-10));
  CHECK(t.asymptotic_guide);

  const auto small = threshold_table(3);
  CHECK(small.small_d);
  CHECK_FALSE(small.lambda_c.has_value());
  CHECK_THROWS_AS(threshold_table(2), DomainError);
}

TEST_CASE("Kesten-Stigum statistic below one for a density just above ln d / d") {
  const int d = 10'000;
  const double a = 1.1 * std::log(d) / d;
  const auto t = threshold_table(d, a);
  REQUIRE(t.kesten_stigum.has_value());
  CHECK(*t.kesten_stigum < 1.0);
}
