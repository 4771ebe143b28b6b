#pragma once

#include <cstdint>
#include <vector>

#include "hardcore/gibbs_lab.hpp"
#include "hardcore/graph_lab.hpp"
#include "hardcore/model_core.hpp"
#include "hardcore/moment_engine.hpp"

// Independent brute-force references used by the test suites and the `oracle` subcommand.
namespace hardcore::oracle {

// E[Z_{G,alpha}] and E[Z_{G,alpha}^2] over all pairings of n*d half-edges (alpha n = s).
Rational first_moment_by_pairings(int n, int d, int s, const Rational& lambda);
Rational second_moment_by_pairings(int n, int d, int s, const Rational& lambda);
// Contribution of ordered pairs (S, T) with |S n T| = t and k half-edges of S\T matched outside S u T.
Rational second_moment_term_by_pairings(int n, int d, int s, int t, int k, const Rational& lambda);

// Punctured census realized literally: m interior vertices of degree d, M1 of degree d-1,
// M2 of degree d-2; the first L1 (resp. L2) boundary vertices are occupied.
Rational punctured_first_by_pairings(const PuncturedCensus& c, int d, int s, const Rational& lambda);
Rational punctured_second_term_by_pairings(const PuncturedCensus& c, int d, int s, int t, int k,
                                           const Rational& lambda);

struct LeafConfigLaw {
  std::vector<std::uint8_t> leaves;
  double p_stat = 0.0;
  double p_root1 = 0.0;
  double p_root0 = 0.0;
  double eta = 0.0;  // P(root = 1 | leaves)
};

// Every leaf configuration of the depth-n d-ary broadcast tree with its exact probabilities.
std::vector<LeafConfigLaw> enumerate_leaf_laws(const HardcoreParams& params, int depth);

// Random forest on n vertices (each vertex attaches to an earlier one with probability p_attach).
Graph random_forest(int n, double p_attach, Rng& rng);

}  // namespace hardcore::oracle
