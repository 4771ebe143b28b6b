#include "hardcore/oracles.hpp"

#include <bit>
#include <functional>

#include "hardcore/errors.hpp"

namespace hardcore::oracle {

namespace {

using BigInt = boost::multiprecision::cpp_int;

struct Layout {
  std::vector<int> owner;           // half-edge -> vertex
  std::vector<std::uint8_t> fixed;  // occupied boundary vertices
  int interior = 0;                 // vertices 0..interior-1 are free
  int vertices = 0;
};

Layout plain_layout(int n, int d) {
  Layout l;
  l.vertices = n;
  l.interior = n;
  l.fixed.assign(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    for (int j = 0; j < d; ++j) l.owner.push_back(v);
  return l;
}

Layout census_layout(const PuncturedCensus& c, int d) {
  Layout l;
  l.interior = static_cast<int>(c.m);
  l.vertices = static_cast<int>(c.m + c.M1 + c.M2);
  l.fixed.assign(static_cast<std::size_t>(l.vertices), 0);
  int v = 0;
  for (std::int64_t i = 0; i < c.m; ++i, ++v)
    for (int j = 0; j < d; ++j) l.owner.push_back(v);
  for (std::int64_t i = 0; i < c.M1; ++i, ++v) {
    for (int j = 0; j < d - 1; ++j) l.owner.push_back(v);
    if (i < c.L1) l.fixed[static_cast<std::size_t>(v)] = 1;
  }
  for (std::int64_t i = 0; i < c.M2; ++i, ++v) {
    for (int j = 0; j < d - 2; ++j) l.owner.push_back(v);
    if (i < c.L2) l.fixed[static_cast<std::size_t>(v)] = 1;
  }
  return l;
}

// Visits every pairing with the vertex conflict masks (bit v of conflict[u] set when u, v share an edge).
void for_each_conflict(const Layout& l, const std::function<void(const std::vector<std::uint32_t>&,
                                                                   const std::vector<int>&)>& fn) {
  const int m = static_cast<int>(l.owner.size());
  if (m % 2 != 0) throw ArgumentError("odd half-edge count");
  if (l.vertices > 32) throw ResourceError("too many vertices for the oracle");
  if (m == 0) {
    fn(std::vector<std::uint32_t>(static_cast<std::size_t>(l.vertices), 0), {});
    return;
  }
  PairingEnumerator en(m);
  std::vector<std::uint32_t> conflict(static_cast<std::size_t>(l.vertices));
  while (en.next()) {
    std::fill(conflict.begin(), conflict.end(), 0u);
    const auto& p = en.pairing();
    for (int h = 0; h < m; ++h) {
      const int u = l.owner[static_cast<std::size_t>(h)];
      const int v = l.owner[static_cast<std::size_t>(p[static_cast<std::size_t>(h)])];
      conflict[static_cast<std::size_t>(u)] |= 1u << v;
    }
    fn(conflict, p);
  }
}

bool independent(std::uint32_t set, const std::vector<std::uint32_t>& conflict) {
  for (std::uint32_t rest = set; rest; rest &= rest - 1) {
    const int v = std::countr_zero(rest);
    if (conflict[static_cast<std::size_t>(v)] & set) return false;
  }
  return true;
}

std::uint32_t fixed_mask(const Layout& l) {
  std::uint32_t m = 0;
  for (int v = 0; v < l.vertices; ++v)
    if (l.fixed[static_cast<std::size_t>(v)]) m |= 1u << v;
  return m;
}

std::vector<std::uint32_t> subsets_of_size(int universe, int s) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < (1u << universe); ++x)
    if (std::popcount(x) == s) out.push_back(x);
  return out;
}

Rational pow_rational(const Rational& x, std::int64_t e) {
  Rational r = 1;
  for (std::int64_t i = 0; i < e; ++i) r *= x;
  return r;
}

Rational average(const BigInt& total, int half_edges) {
  return Rational(total, BigInt(pairing_count(half_edges)));
}

// Sum over pairings of the number of ordered (S, T) with the given overlap statistics.
BigInt count_pairs(const Layout& l, int s, int t, int k, bool any_overlap) {
  const auto subsets = subsets_of_size(l.interior, s);
  const std::uint32_t occ = fixed_mask(l);
  const std::uint32_t all = l.vertices == 32 ? ~0u : ((1u << l.vertices) - 1u);
  BigInt total = 0;
  for_each_conflict(l, [&](const std::vector<std::uint32_t>& conflict, const std::vector<int>& pairing) {
    std::vector<std::uint32_t> good;
    for (auto S : subsets)
      if (independent(S | occ, conflict)) good.push_back(S);
    if (any_overlap) {
      total += static_cast<std::uint64_t>(good.size()) * good.size();
      return;
    }
    for (auto S : good) {
      for (auto T : good) {
        if (std::popcount(S & T) != t) continue;
        const std::uint32_t comp = all & ~(S | T | occ);
        int edges_out = 0;
        for (std::size_t h = 0; h < pairing.size(); ++h) {
          const int u = l.owner[h];
          if (!((S & ~T) >> u & 1u)) continue;
          const int v = l.owner[static_cast<std::size_t>(pairing[h])];
          if (comp >> v & 1u) ++edges_out;
        }
        if (edges_out == k) total += 1;
      }
    }
  });
  return total;
}

}  // namespace

Rational first_moment_by_pairings(int n, int d, int s, const Rational& lambda) {
  const Layout l = plain_layout(n, d);
  const auto subsets = subsets_of_size(n, s);
  BigInt total = 0;
  for_each_conflict(l, [&](const std::vector<std::uint32_t>& conflict, const std::vector<int>&) {
    for (auto S : subsets)
      if (independent(S, conflict)) total += 1;
  });
  return average(total, n * d) * pow_rational(lambda, s);
}

Rational second_moment_by_pairings(int n, int d, int s, const Rational& lambda) {
  return average(count_pairs(plain_layout(n, d), s, 0, 0, true), n * d) * pow_rational(lambda, 2 * s);
}

Rational second_moment_term_by_pairings(int n, int d, int s, int t, int k, const Rational& lambda) {
  return average(count_pairs(plain_layout(n, d), s, t, k, false), n * d) * pow_rational(lambda, 2 * s);
}

Rational punctured_first_by_pairings(const PuncturedCensus& c, int d, int s, const Rational& lambda) {
  const Layout l = census_layout(c, d);
  const auto subsets = subsets_of_size(l.interior, s);
  const std::uint32_t occ = fixed_mask(l);
  BigInt total = 0;
  for_each_conflict(l, [&](const std::vector<std::uint32_t>& conflict, const std::vector<int>&) {
    for (auto S : subsets)
      if (independent(S | occ, conflict)) total += 1;
  });
  return average(total, static_cast<int>(l.owner.size())) * pow_rational(lambda, s + c.L1 + c.L2);
}

Rational punctured_second_term_by_pairings(const PuncturedCensus& c, int d, int s, int t, int k,
                                           const Rational& lambda) {
  const Layout l = census_layout(c, d);
  return average(count_pairs(l, s, t, k, false), static_cast<int>(l.owner.size())) *
         pow_rational(lambda, 2 * s + 2 * (c.L1 + c.L2));
}

std::vector<LeafConfigLaw> enumerate_leaf_laws(const HardcoreParams& params, int depth) {
  const int d = params.d;
  std::size_t leaves = 1;
  for (int i = 0; i < depth; ++i) leaves *= static_cast<std::size_t>(d);
  if (leaves > 20) throw ResourceError("leaf enumeration limited to 20 leaves");
  const MarkovKernel k = markov_kernel(params);
  std::vector<LeafConfigLaw> out;
  for (std::uint32_t key = 0; key < (1u << leaves); ++key) {
    // Likelihoods P(leaves below | node spin) computed level by level.
    std::vector<double> l0(leaves), l1(leaves);
    LeafConfigLaw e;
    e.leaves.resize(leaves);
    for (std::size_t i = 0; i < leaves; ++i) {
      const bool occ = (key >> i) & 1u;
      e.leaves[i] = occ;
      l0[i] = occ ? 0.0 : 1.0;
      l1[i] = occ ? 1.0 : 0.0;
    }
    for (int lvl = depth - 1; lvl >= 0; --lvl) {
      std::vector<double> n0(l0.size() / static_cast<std::size_t>(d)), n1(n0.size());
      for (std::size_t i = 0; i < n0.size(); ++i) {
        double a0 = 1.0, a1 = 1.0;
        for (int c = 0; c < d; ++c) {
          const std::size_t ch = i * static_cast<std::size_t>(d) + static_cast<std::size_t>(c);
          a0 *= k.p00 * l0[ch] + k.p01 * l1[ch];
          a1 *= k.p10 * l0[ch] + k.p11 * l1[ch];
        }
        n0[i] = a0;
        n1[i] = a1;
      }
      l0 = std::move(n0);
      l1 = std::move(n1);
    }
    e.p_root0 = l0[0];
    e.p_root1 = l1[0];
    e.p_stat = params.alpha * e.p_root1 + (1.0 - params.alpha) * e.p_root0;
    if (e.p_stat <= 0.0) continue;
    e.eta = params.alpha * e.p_root1 / e.p_stat;
    out.push_back(std::move(e));
  }
  return out;
}

Graph random_forest(int n, double p_attach, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    if (!bernoulli(rng, p_attach)) continue;
    std::uniform_int_distribution<int> pick(0, v - 1);
    edges.emplace_back(pick(rng), v);
  }
  return Graph(n, std::move(edges));
}

}  // namespace hardcore::oracle
