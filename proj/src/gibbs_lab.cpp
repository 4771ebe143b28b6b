#include "hardcore/gibbs_lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>

#include "hardcore/errors.hpp"

namespace hardcore {

bool is_independent(const Graph& g, const SpinConfig& s) {
  if (s.size() != static_cast<std::size_t>(g.num_vertices())) throw ShapeError("configuration length mismatch");
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!s[static_cast<std::size_t>(v)]) continue;
    if (g.has_loop(v)) return false;
    for (int w : g.neighbors(v))
      if (s[static_cast<std::size_t>(w)]) return false;
  }
  return true;
}

namespace {

// -1 free, 0/1 fixed.
std::vector<int> fixed_spins(const Graph& g, const std::optional<Boundary>& b) {
  std::vector<int> fixed(static_cast<std::size_t>(g.num_vertices()), -1);
  if (!b) return fixed;
  if (b->vertices.size() != b->spins.size()) throw ShapeError("boundary vertices and spins differ in length");
  for (std::size_t i = 0; i < b->vertices.size(); ++i) {
    const int v = b->vertices[i];
    if (v < 0 || v >= g.num_vertices()) throw ArgumentError("boundary vertex out of range");
    fixed[static_cast<std::size_t>(v)] = b->spins[i] ? 1 : 0;
  }
  return fixed;
}

PartitionResult finish(double z, std::vector<double> weighted) {
  PartitionResult r;
  r.z = z;
  r.log_z = z > 0 ? std::log(z) : -INFINITY;
  r.marginals = std::move(weighted);
  if (z > 0)
    for (double& m : r.marginals) m /= z;
  return r;
}

}  // namespace

PartitionResult enumerate_partition(const Graph& g, double lambda, const std::optional<Boundary>& boundary) {
  const int n = g.num_vertices();
  const auto fixed = fixed_spins(g, boundary);
  const int free_count = static_cast<int>(std::count(fixed.begin(), fixed.end(), -1));
  if (free_count > kMaxEnumeratedVertices) throw ResourceError("too many free vertices for subset enumeration");
  std::vector<std::vector<int>> earlier(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    for (int w : g.neighbors(v))
      if (w < v) earlier[static_cast<std::size_t>(v)].push_back(w);

  SpinConfig occ(static_cast<std::size_t>(n), 0);
  std::vector<double> weighted(static_cast<std::size_t>(n), 0.0);
  // Returns the total weight of completions from vertex i; adds prefix * completion mass to marginals.
  std::function<double(int, double)> rec = [&](int i, double prefix) -> double {
    if (i == n) return 1.0;
    const auto ui = static_cast<std::size_t>(i);
    double total = 0.0;
    if (fixed[ui] != 1) total += rec(i + 1, prefix);
    if (fixed[ui] != 0 && !g.has_loop(i)) {
      bool ok = true;
      for (int w : earlier[ui])
        if (occ[static_cast<std::size_t>(w)]) {
          ok = false;
          break;
        }
      if (ok) {
        occ[ui] = 1;
        const double z1 = lambda * rec(i + 1, prefix * lambda);
        occ[ui] = 0;
        weighted[ui] += prefix * z1;
        total += z1;
      }
    }
    return total;
  };
  const double z = rec(0, 1.0);
  return finish(z, std::move(weighted));
}

PartitionResult forest_partition(const Graph& g, double lambda, const std::optional<Boundary>& boundary) {
  if (!g.is_forest()) throw ArgumentError("forest_partition needs a forest");
  const int n = g.num_vertices();
  const auto fixed = fixed_spins(g, boundary);
  std::vector<int> parent(static_cast<std::size_t>(n), -2);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<int> roots;
  for (int s = 0; s < n; ++s) {
    if (parent[static_cast<std::size_t>(s)] != -2) continue;
    parent[static_cast<std::size_t>(s)] = -1;
    roots.push_back(s);
    const std::size_t start = order.size();
    order.push_back(s);
    for (std::size_t h = start; h < order.size(); ++h) {
      const int v = order[h];
      for (int w : g.neighbors(v)) {
        if (parent[static_cast<std::size_t>(w)] == -2) {
          parent[static_cast<std::size_t>(w)] = v;
          order.push_back(w);
        }
      }
    }
  }
  std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
  for (int v : order)
    if (parent[static_cast<std::size_t>(v)] >= 0) children[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])].push_back(v);

  auto allow0 = [&](int v) { return fixed[static_cast<std::size_t>(v)] != 1 ? 1.0 : 0.0; };
  auto allow1 = [&](int v) { return fixed[static_cast<std::size_t>(v)] != 0 ? lambda : 0.0; };

  std::vector<double> u0(static_cast<std::size_t>(n)), u1(static_cast<std::size_t>(n));
  double log_z = 0.0;
  bool zero = false;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    double a0 = allow0(v), a1 = allow1(v);
    for (int c : children[static_cast<std::size_t>(v)]) {
      a0 *= u0[static_cast<std::size_t>(c)] + u1[static_cast<std::size_t>(c)];
      a1 *= u0[static_cast<std::size_t>(c)];
    }
    const double s = a0 + a1;
    if (s <= 0.0) {
      zero = true;
      u0[static_cast<std::size_t>(v)] = u1[static_cast<std::size_t>(v)] = 0.0;
      continue;
    }
    log_z += std::log(s);
    u0[static_cast<std::size_t>(v)] = a0 / s;
    u1[static_cast<std::size_t>(v)] = a1 / s;
  }
  PartitionResult r;
  r.marginals.assign(static_cast<std::size_t>(n), 0.0);
  if (zero) {
    r.z = 0.0;
    r.log_z = -INFINITY;
    return r;
  }
  // Each root's normalized (u0 + u1) is 1, so log_z already holds log Z.
  r.log_z = log_z;
  r.z = std::exp(log_z);

  std::vector<double> o0(static_cast<std::size_t>(n), 1.0), o1(static_cast<std::size_t>(n), 1.0);
  for (int v : order) {
    const auto uv = static_cast<std::size_t>(v);
    const double p1 = o1[uv] * u1[uv];
    const double p0 = o0[uv] * u0[uv];
    r.marginals[uv] = p1 / (p0 + p1);
    const auto& ch = children[uv];
    const std::size_t k = ch.size();
    std::vector<double> pre_any(k + 1, 1.0), pre_zero(k + 1, 1.0), suf_any(k + 1, 1.0), suf_zero(k + 1, 1.0);
    for (std::size_t i = 0; i < k; ++i) {
      const auto c = static_cast<std::size_t>(ch[i]);
      pre_any[i + 1] = pre_any[i] * (u0[c] + u1[c]);
      pre_zero[i + 1] = pre_zero[i] * u0[c];
    }
    for (std::size_t i = k; i-- > 0;) {
      const auto c = static_cast<std::size_t>(ch[i]);
      suf_any[i] = suf_any[i + 1] * (u0[c] + u1[c]);
      suf_zero[i] = suf_zero[i + 1] * u0[c];
    }
    for (std::size_t i = 0; i < k; ++i) {
      const auto c = static_cast<std::size_t>(ch[i]);
      const double b0 = o0[uv] * allow0(v) * pre_any[i] * suf_any[i + 1];
      const double b1 = o1[uv] * allow1(v) * pre_zero[i] * suf_zero[i + 1];
      const double m0 = b0 + b1;
      const double m1 = b0;
      const double s = m0 + m1;
      o0[c] = m0 / s;
      o1[c] = m1 / s;
    }
  }
  return r;
}

PartitionResult brute_force_partition(const Graph& g, double lambda, const std::optional<Boundary>& boundary) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  const auto fixed = fixed_spins(g, boundary);
  const int free_count = static_cast<int>(std::count(fixed.begin(), fixed.end(), -1));
  if (free_count <= kMaxEnumeratedVertices) return enumerate_partition(g, lambda, boundary);
  if (g.is_forest()) return forest_partition(g, lambda, boundary);
  throw ResourceError("graph has more than 26 free vertices and is not a forest");
}

std::vector<double> partition_by_configuration(const Graph& g, double lambda, const std::vector<int>& watched) {
  if (watched.size() > 20) throw ResourceError("at most 20 watched vertices");
  const std::size_t k = watched.size();
  std::vector<double> out(std::size_t{1} << k, 0.0);
  Boundary b{watched, std::vector<std::uint8_t>(k, 0)};
  for (std::uint64_t key = 0; key < out.size(); ++key) {
    for (std::size_t i = 0; i < k; ++i) b.spins[i] = static_cast<std::uint8_t>((key >> i) & 1u);
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      if (!b.spins[i]) continue;
      if (g.has_loop(watched[i])) ok = false;
      for (std::size_t j = i + 1; j < k && ok; ++j) {
        if (!b.spins[j]) continue;
        const auto& nb = g.neighbors(watched[i]);
        if (watched[i] == watched[j] || std::binary_search(nb.begin(), nb.end(), watched[j])) ok = false;
      }
    }
    if (!ok) continue;
    out[key] = brute_force_partition(g, lambda, b).z;
  }
  return out;
}

GlauberChain::GlauberChain(const Graph& g, double lambda, Rng rng)
    : g_(&g),
      p_occupy_(lambda / (1.0 + lambda)),
      rng_(std::move(rng)),
      state_(static_cast<std::size_t>(g.num_vertices()), 0),
      blocked_(static_cast<std::size_t>(g.num_vertices()), 0) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
}

void GlauberChain::set_spin(int v, std::uint8_t s) {
  auto& cur = state_[static_cast<std::size_t>(v)];
  if (cur == s) return;
  cur = s;
  const int delta = s ? 1 : -1;
  occupied_ += delta;
  for (int w : g_->neighbors(v)) blocked_[static_cast<std::size_t>(w)] += delta;
}

void GlauberChain::step() {
  const auto n = static_cast<std::uint64_t>(g_->num_vertices());
  if (n == 0) return;
  const int v = static_cast<int>((static_cast<unsigned __int128>(rng_()) * n) >> 64);
  const bool can = !g_->has_loop(v) && blocked_[static_cast<std::size_t>(v)] == 0;
  const bool occupy = uniform01(rng_) < p_occupy_;
  set_spin(v, static_cast<std::uint8_t>(can && occupy));
}

void GlauberChain::sweep() {
  const int n = g_->num_vertices();
  for (int i = 0; i < n; ++i) step();
}

void GlauberChain::sweeps(std::int64_t count) {
  for (std::int64_t i = 0; i < count; ++i) sweep();
}

std::vector<SpinConfig> glauber_sample(const Graph& g, double lambda, std::int64_t sweeps, std::int64_t burn_in,
                                       Rng& rng, std::int64_t thin) {
  if (sweeps < 0 || burn_in < 0 || thin < 1) throw ArgumentError("sweeps/burn_in must be >= 0 and thin >= 1");
  GlauberChain chain(g, lambda, Rng(rng()));
  chain.sweeps(burn_in);
  std::vector<SpinConfig> out;
  for (std::int64_t s = 1; s <= sweeps; ++s) {
    chain.sweep();
    if (s % thin == 0) out.push_back(chain.state());
  }
  return out;
}

double heat_bath_probability(const Graph& g, double lambda, const SpinConfig& from, const SpinConfig& to) {
  const int n = g.num_vertices();
  if (from.size() != static_cast<std::size_t>(n) || to.size() != from.size()) throw ShapeError("configuration length mismatch");
  const double p = lambda / (1.0 + lambda);
  auto prob_new = [&](int v, std::uint8_t s) {
    bool can = !g.has_loop(v);
    for (int w : g.neighbors(v))
      if (from[static_cast<std::size_t>(w)]) can = false;
    const double q1 = can ? p : 0.0;
    return s ? q1 : 1.0 - q1;
  };
  int diff = -1, ndiff = 0;
  for (int v = 0; v < n; ++v)
    if (from[static_cast<std::size_t>(v)] != to[static_cast<std::size_t>(v)]) {
      diff = v;
      ++ndiff;
    }
  if (ndiff > 1) return 0.0;
  if (ndiff == 1) return prob_new(diff, to[static_cast<std::size_t>(diff)]) / n;
  double stay = 0.0;
  for (int v = 0; v < n; ++v) stay += prob_new(v, from[static_cast<std::size_t>(v)]);
  return stay / n;
}

double Law::prob(std::uint64_t key) const {
  const auto it = probs.find(key);
  return it == probs.end() ? 0.0 : it->second;
}

double Law::total() const {
  double t = 0.0;
  for (const auto& [k, p] : probs) t += p;
  return t;
}

Law Law::marginal(const std::vector<int>& positions) const {
  Law out;
  out.width = static_cast<int>(positions.size());
  for (const auto& [key, p] : probs) {
    std::uint64_t sub = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) sub |= ((key >> positions[i]) & 1u) << i;
    out.probs[sub] += p;
  }
  return out;
}

EmpiricalLaw::EmpiricalLaw(std::vector<int> support_vertices) : support(std::move(support_vertices)) {
  if (support.size() > 64) throw ResourceError("empirical laws support at most 64 vertices");
}

void EmpiricalLaw::add(const SpinConfig& s) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < support.size(); ++i)
    key |= static_cast<std::uint64_t>(s[static_cast<std::size_t>(support[i])] & 1u) << i;
  counts[key] += 1;
  total += 1;
}

void EmpiricalLaw::merge(const EmpiricalLaw& other) {
  if (other.support != support) throw ArgumentError("cannot merge empirical laws over different supports");
  for (const auto& [k, c] : other.counts) counts[k] += c;
  total += other.total;
}

Law EmpiricalLaw::normalized() const {
  Law l;
  l.width = static_cast<int>(support.size());
  if (total == 0) return l;
  for (const auto& [k, c] : counts) l.probs[k] = static_cast<double>(c) / static_cast<double>(total);
  return l;
}

double tv_distance(const Law& a, const Law& b) {
  if (a.width != b.width) throw ArgumentError("tv_distance: laws over different supports");
  double s = 0.0;
  for (const auto& [k, p] : a.probs) s += std::abs(p - b.prob(k));
  for (const auto& [k, q] : b.probs)
    if (!a.probs.count(k)) s += std::abs(q);
  return 0.5 * s;
}

double tv_bias_bound(std::size_t support_size, std::uint64_t samples) {
  if (samples == 0) return 1.0;
  return (static_cast<double>(support_size) - 1.0) / (2.0 * static_cast<double>(samples));
}

Graph tree_ball_graph(int d, int r) {
  if (d < 1 || r < 0) throw ArgumentError("tree ball needs d >= 1 and r >= 0");
  std::vector<std::pair<int, int>> edges;
  std::vector<int> frontier{0};
  int next = 1;
  for (int depth = 0; depth < r; ++depth) {
    std::vector<int> nf;
    for (int v : frontier) {
      const int kids = depth == 0 ? d : d - 1;
      for (int c = 0; c < kids; ++c) {
        edges.emplace_back(v, next);
        nf.push_back(next++);
      }
    }
    frontier = std::move(nf);
  }
  return Graph(next, std::move(edges));
}

Law tree_ball_law(const HardcoreParams& params, int r, std::size_t cap) {
  const Graph t = tree_ball_graph(params.d, r);
  const int n = t.num_vertices();
  if (n > 64) throw ResourceError("tree ball exceeds 64 vertices");
  const MarkovKernel k = markov_kernel(params);
  // BFS numbering: every vertex's parent precedes it.
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  for (const auto& e : t.edges()) parent[static_cast<std::size_t>(e.second)] = e.first;
  Law law;
  law.width = n;
  std::function<void(int, std::uint64_t, double)> rec = [&](int v, std::uint64_t key, double p) {
    if (p == 0.0) return;
    if (v == n) {
      if (law.probs.size() >= cap) throw ResourceError("tree ball law exceeds the configuration cap");
      law.probs[key] += p;
      return;
    }
    double p1;
    if (v == 0) {
      p1 = params.alpha;
    } else {
      const bool parent_occ = (key >> parent[static_cast<std::size_t>(v)]) & 1u;
      p1 = parent_occ ? k.p11 : k.p01;
    }
    rec(v + 1, key, p * (1.0 - p1));
    rec(v + 1, key | (std::uint64_t{1} << v), p * p1);
  };
  rec(0, 0, 1.0);
  return law;
}

KappaNuReport kappa_and_nu(const Graph& g, const PuncturedGraph& p, double lambda) {
  KappaNuReport rep;
  rep.boundary = p.boundary;
  const std::size_t nb = p.boundary.size();
  if (nb > 20) throw ResourceError("boundary larger than 20 spins");
  {
    std::size_t pos = 0;
    for (const auto& w : p.groups) {
      std::vector<int> idx(w.size());
      std::iota(idx.begin(), idx.end(), static_cast<int>(pos));
      pos += w.size();
      rep.group_positions.push_back(std::move(idx));
    }
  }
  const Graph gt = g.induced(p.surviving);
  std::vector<int> index(static_cast<std::size_t>(g.num_vertices()), -1);
  for (std::size_t i = 0; i < p.surviving.size(); ++i) index[static_cast<std::size_t>(p.surviving[i])] = static_cast<int>(i);
  std::vector<int> boundary_t;
  for (int v : p.boundary) boundary_t.push_back(index[static_cast<std::size_t>(v)]);

  const auto zg = partition_by_configuration(g, lambda, p.boundary);
  const auto zt = partition_by_configuration(gt, lambda, boundary_t);
  for (std::uint64_t key = 0; key < zg.size(); ++key) {
    if (zt[key] <= 0.0) {
      ++rep.forbidden;
      continue;
    }
    rep.kappa[key] = zg[key] / zt[key];
  }
  rep.kappa_sigma0 = rep.kappa.at(0);

  // Anchored factors: kappa with only W_i switched on, relative to sigma_0.
  const std::size_t groups = rep.group_positions.size();
  rep.factors.resize(groups);
  auto embed = [&](std::size_t gi, std::uint64_t pattern) {
    std::uint64_t key = 0;
    const auto& pos = rep.group_positions[gi];
    for (std::size_t j = 0; j < pos.size(); ++j) key |= ((pattern >> j) & 1u) << pos[j];
    return key;
  };
  auto restrict_to = [&](std::size_t gi, std::uint64_t key) {
    std::uint64_t pattern = 0;
    const auto& pos = rep.group_positions[gi];
    for (std::size_t j = 0; j < pos.size(); ++j) pattern |= ((key >> pos[j]) & 1u) << j;
    return pattern;
  };
  for (std::size_t gi = 0; gi < groups; ++gi) {
    const std::size_t w = rep.group_positions[gi].size();
    for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << w); ++pat) {
      const auto it = rep.kappa.find(embed(gi, pat));
      if (it != rep.kappa.end()) rep.factors[gi][pat] = it->second / rep.kappa_sigma0;
    }
  }
  double resid = 0.0;
  for (const auto& [key, kv] : rep.kappa) {
    double pred = std::log(rep.kappa_sigma0);
    for (std::size_t gi = 0; gi < groups; ++gi) pred += std::log(rep.factors[gi].at(restrict_to(gi, key)));
    resid = std::max(resid, std::abs(std::log(kv) - pred));
  }
  rep.log_residual = resid;

  double iso = 0.0;
  const std::size_t k = p.centers_prime.size();
  for (std::size_t i = 1; i < k; ++i) {
    if (rep.factors[i].size() != rep.factors[0].size() ||
        rep.group_positions[i].size() != rep.group_positions[0].size())
      continue;
    for (const auto& [pat, v] : rep.factors[0]) {
      const auto it = rep.factors[i].find(pat);
      iso = std::max(iso, it == rep.factors[i].end() ? INFINITY : std::abs(it->second - v));
    }
  }
  rep.isomorphic_max_diff = iso;

  double norm = 0.0;
  rep.nu.width = static_cast<int>(nb);
  for (const auto& [key, kv] : rep.kappa) {
    const double w = chi(std::popcount(key), lambda, p.d) * kv;
    rep.nu.probs[key] = w;
    norm += w;
  }
  for (auto& [key, w] : rep.nu.probs) w /= norm;
  return rep;
}

PointToSetResult point_to_set_estimate(const Graph& g, int u, int L, double lambda, std::int64_t samples, Rng& rng,
                                       std::int64_t burn_in_sweeps) {
  if (samples <= 0) throw ArgumentError("samples must be positive");
  if (L < 0) throw ArgumentError("L must be nonnegative");
  if (u < 0 || u >= g.num_vertices()) throw ArgumentError("vertex out of range");
  PointToSetResult res;
  res.alpha = params_from_lambda(g.degree(u), lambda).alpha;

  const Ball b = ball(g, u, L);
  std::vector<int> shell_local;  // positions within the ball at distance exactly L
  for (std::size_t i = 0; i < b.vertices.size(); ++i)
    if (b.distance[i] == L) shell_local.push_back(static_cast<int>(i));
  if (shell_local.size() > 64) throw ResourceError("ball boundary exceeds 64 vertices");
  const int interior = static_cast<int>(b.vertices.size() - shell_local.size());
  if (interior > kMaxEnumeratedVertices && !b.induced.is_forest())
    throw ResourceError("ball interior is neither small nor a forest");

  std::unordered_map<std::uint64_t, double> cache;
  auto inner = [&](const SpinConfig& s) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < shell_local.size(); ++i)
      key |= static_cast<std::uint64_t>(s[static_cast<std::size_t>(b.vertices[static_cast<std::size_t>(shell_local[i])])]) << i;
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Boundary bd{shell_local, std::vector<std::uint8_t>(shell_local.size())};
    for (std::size_t i = 0; i < shell_local.size(); ++i) bd.spins[i] = static_cast<std::uint8_t>((key >> i) & 1u);
    const double p1 = brute_force_partition(b.induced, lambda, bd).marginals[0];
    cache.emplace(key, p1);
    return p1;
  };

  GlauberChain chain(g, lambda, Rng(rng()));
  chain.sweeps(burn_in_sweeps);
  double sum = 0.0, sum2 = 0.0, occ = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    chain.sweep();
    const double dev = std::abs(inner(chain.state()) - res.alpha);
    sum += dev;
    sum2 += dev * dev;
    occ += chain.state()[static_cast<std::size_t>(u)];
  }
  const double ns = static_cast<double>(samples);
  res.samples = samples;
  res.estimate = sum / ns;
  res.occupation = occ / ns;
  res.stderr_ = samples > 1 ? std::sqrt(std::max(0.0, (sum2 / ns - res.estimate * res.estimate) / (ns - 1))) : 0.0;
  return res;
}

}  // namespace hardcore
