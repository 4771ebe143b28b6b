#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "hardcore/errors.hpp"
#include "hardcore/oracles.hpp"
#include "hardcore/tree_recon.hpp"

using namespace hardcore;
using doctest::Approx;

TEST_CASE("broadcast respects the hardcore constraint and the stationary density") {
  const auto p = params_from_lambda(3, 1.0);
  Rng rng = make_stream(3, 0);
  double occ = 0.0, total = 0.0;
  for (int rep = 0; rep < 2000; ++rep) {
    const auto b = broadcast_sample(p, 4, rng);
    for (int l = 0; l < 4; ++l)
      for (std::size_t i = 0; i < b.levels[l].size(); ++i)
        if (b.levels[l][i])
          for (int c = 0; c < 3; ++c) CHECK(b.levels[l + 1][3 * i + c] == 0);
    for (auto s : b.levels[4]) occ += s;
    total += static_cast<double>(b.levels[4].size());
  }
  const double frac = occ / total;
  // Leaves within one sample are correlated; 4 sigma of the independent bound is generous enough here.
  CHECK(std::abs(frac - p.alpha) < 4.0 * std::sqrt(p.alpha * (1 - p.alpha) / total) * 3.0);
}

TEST_CASE("depth-zero broadcast is Bernoulli(alpha)") {
  const auto p = params_from_alpha(3, 0.2);
  Rng rng = make_stream(4, 0);
  const int n = 1'000'000;
  long hits = 0;
  for (int i = 0; i < n; ++i) hits += broadcast_sample(p, 0, rng).levels[0][0];
  CHECK(std::abs(static_cast<double>(hits) / n - 0.2) < 4.0 * std::sqrt(0.16 / n));
}

TEST_CASE("posterior at depth one") {
  const auto p = params_from_lambda(3, 1.0);
  const std::vector<std::uint8_t> zeros(3, 0), one{0, 1, 0};
  CHECK(posterior_root(zeros, p).p_root_zero == Approx(0.5).epsilon(1e-14));
  CHECK(posterior_root(one, p).p_root_zero == 1.0);
  CHECK_THROWS_AS(posterior_root(std::vector<std::uint8_t>(4, 0), p), ShapeError);
}

TEST_CASE("atoms at small depth") {
  const double lam = 1.7;
  const auto p = params_from_lambda(3, lam);
  const auto a1 = posterior_atoms(p, 1);
  double w1 = 0.0;
  for (const auto& t : a1.atoms)
    if (std::abs(t.eta - (1.0 - 1.0 / (1.0 + lam))) < 1e-12) w1 += t.w_root1;
  CHECK(w1 == Approx(1.0).epsilon(1e-14));

  const auto a2 = posterior_atoms(p, 2);
  const double q = std::pow(markov_kernel(p).p00, 3);
  double w = 0.0;
  for (const auto& t : a2.atoms)
    if (std::abs(t.eta - lam / (1.0 + lam)) < 1e-12) w += t.w_root1;
  CHECK(w == Approx(std::pow(1 - q, 3)).epsilon(1e-13));

  for (int depth = 1; depth <= 4; ++depth) {
    const auto a = posterior_atoms(p, depth);
    double s0 = 0, s1 = 0, ss = 0, mean = 0;
    for (const auto& t : a.atoms) s0 += t.w_root0, s1 += t.w_root1, ss += t.w_stat, mean += t.w_stat * t.eta;
    CHECK(std::abs(s0 - 1) < 1e-12);
    CHECK(std::abs(s1 - 1) < 1e-12);
    CHECK(std::abs(ss - 1) < 1e-12);
    CHECK(std::abs(mean - p.alpha) < 1e-10);
  }
}

TEST_CASE("exact magnetization agrees with leaf enumeration and satisfies the basic relations") {
  for (int d : {2, 3}) {
    for (double lam : {0.5, 1.0, 2.0}) {
      const auto p = params_from_lambda(d, lam);
      const double pi01 = derived_constants(p).pi01;
      double prev = INFINITY;
      for (int depth = 1; depth <= 3; ++depth) {
        const auto m = xbar_from_atoms(posterior_atoms(p, depth), p);
        CHECK(std::abs(m.xbar - (p.alpha * m.xbar1 + (1 - p.alpha) * m.xbar0)) < 1e-12);
        CHECK(std::abs(m.mean_x) < 1e-12);
        CHECK(std::abs(m.mean_x_root1 - pi01 * m.xbar) < 1e-12);
        CHECK(m.xbar <= prev + 1e-15);
        prev = m.xbar;
        if (std::pow(d, depth) <= 20) {
          double xb = 0.0;
          for (const auto& l : oracle::enumerate_leaf_laws(p, depth)) {
            const double x = (l.eta / p.alpha - 1) / pi01;
            xb += l.p_stat * x * x;
          }
          CHECK(std::abs(xb - m.xbar) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("Monte Carlo magnetization matches the exact value and is centered") {
  const auto p = params_from_lambda(3, 2.0);
  Rng rng = make_stream(5, 0);
  const auto mc = xbar(p, 3, Method::mc, 200'000, rng);
  const auto ex = xbar(p, 3, Method::exact, 0, rng);
  REQUIRE(mc.mc_stderr.has_value());
  CHECK(std::abs(mc.xbar - ex.xbar) < 4 * *mc.mc_stderr);
  CHECK(std::abs(mc.mean_x) < 4 * *mc.mean_x_stderr);
  CHECK(std::abs(mc.xbar - (p.alpha * mc.xbar1 + (1 - p.alpha) * mc.xbar0)) < 3 * *mc.mc_stderr);
}

TEST_CASE("Monte Carlo is reproducible for a fixed seed") {
  const auto p = params_from_lambda(3, 1.0);
  Rng a = make_stream(9, 1), b = make_stream(9, 1);
  CHECK(xbar(p, 4, Method::mc, 20'000, a).xbar == xbar(p, 4, Method::mc, 20'000, b).xbar);
}

TEST_CASE("zero density is the deterministic all-empty model") {
  const auto p = params_from_alpha(3, 0.0);
  Rng rng = make_stream(1, 0);
  const auto r = contraction_check(p, 3, 1000, rng);
  for (const auto& row : r.rows) CHECK(row.xbar == 0.0);
}

TEST_CASE("depth-3 check") {
  const auto small = params_from_lambda(3, 1.0);
  const auto rep = depth3_check(small);
  CHECK(rep.expected_posterior_root1 >= 0.0);
  CHECK(rep.expected_posterior_root1 <= 1.0);
  CHECK(std::abs(rep.xbar3 - xbar_from_atoms(posterior_atoms(small, 3), small).xbar) < 1e-10);

  // The two exact routes agree where both apply.
  const auto mid = params_from_alpha(8, depth3_alpha(8, 1.2));
  CHECK(std::abs(depth3_check(mid, 1.2).expected_posterior_root1 - depth3_expected_posterior_cf(mid)) < 1e-8);

  const int d = 10'000;
  const auto big = params_from_alpha(d, depth3_alpha(d, 1.2));
  const auto r = depth3_check(big, 1.2);
  CHECK(r.passes);
  CHECK(r.method == "characteristic-function");
  CHECK(depth3_check(big, 1.0).beta_warning);
}

TEST_CASE("contraction coefficient") {
  const auto p = params_from_alpha(3, 0.1);
  const double expect = (1.0 / 81.0) * (81.0 / 64.0) * std::exp(0.15) * 3.0;
  CHECK(contraction_coefficient(p) == Approx(expect).epsilon(1e-12));
  CHECK(contraction_coefficient(p) == Approx(0.05446).epsilon(1e-4));
}
