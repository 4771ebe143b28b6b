#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "hardcore/errors.hpp"
#include "hardcore/gibbs_lab.hpp"
#include "hardcore/graph_lab.hpp"

using namespace hardcore;

TEST_CASE("pairings are fixed-point-free involutions") {
  Rng rng = make_stream(1, 0);
  for (int i = 0; i < 50; ++i) {
    const auto g = sample_configuration_model(10 + 2 * i, 3 + i % 2, rng);
    for (std::size_t h = 0; h < g.pairing.size(); ++h) {
      CHECK(g.pairing[h] != static_cast<int>(h));
      CHECK(g.pairing[static_cast<std::size_t>(g.pairing[h])] == static_cast<int>(h));
    }
  }
  const auto one = sample_configuration_model(2, 1, rng);
  CHECK(one.pairing == std::vector<int>{1, 0});
  CHECK(is_simple(one));
  CHECK_THROWS_AS(sample_configuration_model(3, 3, rng), ArgumentError);
}

TEST_CASE("pairing enumeration") {
  std::uint64_t c = 0;
  PairingEnumerator e(4, 3);
  while (e.next()) ++c;
  CHECK(c == 10395);
  CHECK(pairing_count(12) == 10395);
  PairingEnumerator two(2);
  CHECK(two.next());
  CHECK_FALSE(two.next());
}

namespace {

std::map<std::vector<int>, int> matching_index() {
  std::map<std::vector<int>, int> idx;
  PairingEnumerator e(8);
  while (e.next()) idx.emplace(e.pairing(), static_cast<int>(idx.size()));
  return idx;
}

double chi2_pvalue(const std::vector<long>& counts) {
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), 0L));
  const double expect = n / static_cast<double>(counts.size());
  double stat = 0.0;
  for (long c : counts) stat += (c - expect) * (c - expect) / expect;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("both samplers are uniform over the 105 matchings of 8 half-edges") {
  const auto idx = matching_index();
  REQUIRE(idx.size() == 105);
  Rng rng = make_stream(2, 0);
  std::vector<long> seq(105, 0), whole(105, 0);
  for (int i = 0; i < 1'000'000; ++i) {
    seq[static_cast<std::size_t>(idx.at(sample_configuration_model(8, 1, rng).pairing))]++;
    whole[static_cast<std::size_t>(idx.at(sample_configuration_model_shuffled(8, 1, rng).pairing))]++;
  }
  CHECK(chi2_pvalue(seq) > 0.001);
  CHECK(chi2_pvalue(whole) > 0.001);
}

TEST_CASE("multigraph semantics") {
  const Graph g(3, {{0, 0}, {0, 1}, {0, 1}, {1, 2}});
  CHECK(g.has_loop(0));
  CHECK(g.has_parallel_edges());
  CHECK(g.neighbors(0) == std::vector<int>{1});
  CHECK(g.degree(0) == 4);
  CHECK_FALSE(g.is_simple());
  CHECK_FALSE(g.is_forest());
}

TEST_CASE("balls, spheres and punctures") {
  const Graph tree = tree_ball_graph(3, 3);
  const Ball b = ball(tree, 0, 1);
  CHECK(b.vertices == std::vector<int>{0, 1, 2, 3});
  CHECK(b.is_tree);
  CHECK(sphere(tree, 0, 2).size() == 6);

  const auto p = puncture(tree, {0}, 1, 3);
  CHECK(p.centers_prime == std::vector<int>{0});
  for (int v : p.groups[0]) CHECK(p.surviving_degree[static_cast<std::size_t>(v)] == 2);
  CHECK(p.census.M1 == 3);

  const auto empty = puncture(tree, {}, 1, 3);
  CHECK(empty.surviving.size() == static_cast<std::size_t>(tree.num_vertices()));
  CHECK(empty.boundary.empty());

  // Centers 1 and 2 are at distance 2 = 2r: both dropped.
  const auto clash = puncture(tree, {1, 2}, 1, 3);
  CHECK(clash.centers_prime.empty());
}

TEST_CASE("surviving degrees on a crafted cycle instance") {
  // 6-cycle with a chord 0-3, center 1 at radius 1.
  const Graph g(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}});
  const auto p = puncture(g, {1}, 1, 3);
  CHECK(p.surviving_degree[0] == 2);
  CHECK(p.surviving_degree[2] == 1);
  CHECK(p.surviving_degree[3] == 3);
  CHECK(p.surviving_degree[1] == -1);
  CHECK(p.census.M1 == 1);
  CHECK(p.census.M2 == 1);
  CHECK(p.anomalies.empty());

  // Triple edge: the lone boundary vertex keeps no edges at all.
  const Graph theta(2, {{0, 1}, {0, 1}, {0, 1}});
  const auto q = puncture(theta, {0}, 1, 3);
  CHECK(q.anomalies == std::vector<int>{1});
}

TEST_CASE("graph files roundtrip and reject malformed input") {
  Rng rng = make_stream(3, 0);
  const auto g = sample_configuration_model(12, 3, rng);
  std::stringstream ss;
  write_graph(ss, g);
  const auto back = read_graph(ss);
  CHECK(back.pairing == g.pairing);
  CHECK(graph_hash(back) == graph_hash(g));

  std::stringstream bad("2 2\n0 1\n0 2\n");
  CHECK_THROWS_AS(read_graph(bad), ShapeError);
  std::stringstream short_file("2 2\n0 1\n");
  CHECK_THROWS_AS(read_graph(short_file), ShapeError);
}
