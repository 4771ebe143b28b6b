#include "hardcore/graph_lab.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include "hardcore/errors.hpp"

namespace hardcore {

void validate(const HalfEdgeGraph& g) {
  if (g.n < 0 || g.d < 0) throw ShapeError("negative graph dimensions");
  const std::size_t m = static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.d);
  if (g.pairing.size() != m) throw ShapeError("pairing length differs from n*d");
  for (std::size_t i = 0; i < m; ++i) {
    const int j = g.pairing[i];
    if (j < 0 || static_cast<std::size_t>(j) >= m) throw ShapeError("pairing entry out of range");
    if (static_cast<std::size_t>(j) == i) throw ShapeError("pairing has a fixed point");
    if (static_cast<std::size_t>(g.pairing[static_cast<std::size_t>(j)]) != i)
      throw ShapeError("pairing is not an involution");
  }
}

namespace {

void check_config_args(int n, int d) {
  if (n < 1 || d < 1) throw ArgumentError("n and d must be positive");
  if ((static_cast<std::int64_t>(n) * d) % 2 != 0) throw ArgumentError("n*d must be even");
}

}  // namespace

HalfEdgeGraph sample_configuration_model(int n, int d, Rng& rng) {
  check_config_args(n, d);
  const int m = n * d;
  HalfEdgeGraph g{n, d, std::vector<int>(static_cast<std::size_t>(m), -1)};
  std::vector<int> pool(static_cast<std::size_t>(m));
  std::iota(pool.begin(), pool.end(), 0);
  while (!pool.empty()) {
    const int h = pool.back();
    pool.pop_back();
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const std::size_t idx = pick(rng);
    const int partner = pool[idx];
    pool[idx] = pool.back();
    pool.pop_back();
    g.pairing[static_cast<std::size_t>(h)] = partner;
    g.pairing[static_cast<std::size_t>(partner)] = h;
  }
  return g;
}

HalfEdgeGraph sample_configuration_model_shuffled(int n, int d, Rng& rng) {
  check_config_args(n, d);
  const int m = n * d;
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  HalfEdgeGraph g{n, d, std::vector<int>(static_cast<std::size_t>(m), -1)};
  for (std::size_t i = 0; i < perm.size(); i += 2) {
    g.pairing[static_cast<std::size_t>(perm[i])] = perm[i + 1];
    g.pairing[static_cast<std::size_t>(perm[i + 1])] = perm[i];
  }
  return g;
}

bool is_simple(const HalfEdgeGraph& g) {
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < g.pairing.size(); ++i) {
    const int j = g.pairing[i];
    if (static_cast<int>(i) > j) continue;
    const int u = g.vertex_of(static_cast<int>(i));
    const int v = g.vertex_of(j);
    if (u == v) return false;
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) return false;
  }
  return true;
}

std::uint64_t pairing_count(int half_edges) {
  if (half_edges % 2 != 0) return 0;
  std::uint64_t c = 1;
  for (int k = half_edges - 1; k > 1; k -= 2) c *= static_cast<std::uint64_t>(k);
  return c;
}

PairingEnumerator::PairingEnumerator(int n, int d) : n_(n), d_(d) {
  check_config_args(n, d);
  const int m = n * d;
  if (m > 16) throw ResourceError("pairing enumeration limited to n*d <= 16");
  levels_ = m / 2;
  pairing_.assign(static_cast<std::size_t>(m), -1);
  low_.assign(static_cast<std::size_t>(levels_), -1);
  partner_.assign(static_cast<std::size_t>(levels_), -1);
}

void PairingEnumerator::fill_from(int level) {
  const int m = static_cast<int>(pairing_.size());
  for (int j = level; j < levels_; ++j) {
    int lo = 0;
    while (pairing_[static_cast<std::size_t>(lo)] != -1) ++lo;
    int c = lo + 1;
    while (c < m && pairing_[static_cast<std::size_t>(c)] != -1) ++c;
    low_[static_cast<std::size_t>(j)] = lo;
    partner_[static_cast<std::size_t>(j)] = c;
    pairing_[static_cast<std::size_t>(lo)] = c;
    pairing_[static_cast<std::size_t>(c)] = lo;
  }
}

bool PairingEnumerator::next() {
  if (!started_) {
    started_ = true;
    fill_from(0);
    return true;
  }
  const int m = static_cast<int>(pairing_.size());
  for (int j = levels_ - 1; j >= 0; --j) {
    const int lo = low_[static_cast<std::size_t>(j)];
    int c = partner_[static_cast<std::size_t>(j)];
    pairing_[static_cast<std::size_t>(lo)] = -1;
    pairing_[static_cast<std::size_t>(c)] = -1;
    ++c;
    while (c < m && pairing_[static_cast<std::size_t>(c)] != -1) ++c;
    if (c < m) {
      partner_[static_cast<std::size_t>(j)] = c;
      pairing_[static_cast<std::size_t>(lo)] = c;
      pairing_[static_cast<std::size_t>(c)] = lo;
      fill_from(j + 1);
      return true;
    }
  }
  return false;
}

Graph::Graph(int n, std::vector<std::pair<int, int>> edges)
    : n_(n),
      edges_(std::move(edges)),
      adj_(static_cast<std::size_t>(n)),
      loop_(static_cast<std::size_t>(n), 0),
      degree_(static_cast<std::size_t>(n), 0) {
  if (n < 0) throw ArgumentError("negative vertex count");
  for (auto& e : edges_) {
    if (e.first < 0 || e.first >= n || e.second < 0 || e.second >= n) throw ArgumentError("edge endpoint out of range");
    if (e.first > e.second) std::swap(e.first, e.second);
    degree_[static_cast<std::size_t>(e.first)] += 1;
    degree_[static_cast<std::size_t>(e.second)] += 1;
    if (e.first == e.second) {
      loop_[static_cast<std::size_t>(e.first)] = 1;
    } else {
      adj_[static_cast<std::size_t>(e.first)].push_back(e.second);
      adj_[static_cast<std::size_t>(e.second)].push_back(e.first);
    }
  }
  for (auto& a : adj_) {
    std::sort(a.begin(), a.end());
    const auto last = std::unique(a.begin(), a.end());
    if (last != a.end()) parallel_ = true;
    a.erase(last, a.end());
  }
  std::map<std::pair<int, int>, int> loops;
  for (const auto& e : edges_)
    if (e.first == e.second && ++loops[e] > 1) parallel_ = true;
}

Graph Graph::from_half_edges(const HalfEdgeGraph& g) {
  validate(g);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.pairing.size() / 2);
  for (std::size_t i = 0; i < g.pairing.size(); ++i) {
    const int j = g.pairing[i];
    if (static_cast<int>(i) < j) edges.emplace_back(g.vertex_of(static_cast<int>(i)), g.vertex_of(j));
  }
  return Graph(g.n, std::move(edges));
}

bool Graph::has_loops() const {
  return std::any_of(loop_.begin(), loop_.end(), [](char c) { return c != 0; });
}

bool Graph::is_forest() const {
  if (has_loops() || parallel_) return false;
  std::vector<int> parent(static_cast<std::size_t>(n_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& e : edges_) {
    const int a = find(e.first), b = find(e.second);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
  }
  return true;
}

Graph Graph::induced(const std::vector<int>& keep) const {
  std::vector<int> index(static_cast<std::size_t>(n_), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const int v = keep[i];
    if (v < 0 || v >= n_) throw ArgumentError("induced: vertex out of range");
    index[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  std::vector<std::pair<int, int>> sub;
  for (const auto& e : edges_) {
    const int a = index[static_cast<std::size_t>(e.first)], b = index[static_cast<std::size_t>(e.second)];
    if (a >= 0 && b >= 0) sub.emplace_back(a, b);
  }
  return Graph(static_cast<int>(keep.size()), std::move(sub));
}

namespace {

// BFS to depth r; returns vertices in visit order with their distances.
std::pair<std::vector<int>, std::vector<int>> bfs(const Graph& g, int v, int r) {
  if (v < 0 || v >= g.num_vertices()) throw ArgumentError("vertex out of range");
  std::vector<int> dist(static_cast<std::size_t>(g.num_vertices()), -1);
  std::vector<int> order{v};
  std::vector<int> ds{0};
  dist[static_cast<std::size_t>(v)] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int u = order[head];
    const int du = dist[static_cast<std::size_t>(u)];
    if (du == r) continue;
    for (int w : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(w)] == -1) {
        dist[static_cast<std::size_t>(w)] = du + 1;
        order.push_back(w);
        ds.push_back(du + 1);
      }
    }
  }
  return {order, ds};
}

}  // namespace

Ball ball(const Graph& g, int v, int r) {
  if (r < 0) throw ArgumentError("ball radius must be nonnegative");
  auto [order, ds] = bfs(g, v, r);
  Ball b;
  b.vertices = std::move(order);
  b.distance = std::move(ds);
  b.induced = g.induced(b.vertices);
  b.is_tree = b.induced.is_simple() &&
              b.induced.edges().size() + 1 == static_cast<std::size_t>(b.induced.num_vertices());
  return b;
}

std::vector<int> sphere(const Graph& g, int v, int r) {
  auto [order, ds] = bfs(g, v, r);
  std::vector<int> out;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (ds[i] == r) out.push_back(order[i]);
  return out;
}

PuncturedGraph puncture(const Graph& g, const std::vector<int>& centers, int r, int d) {
  if (r < 1) throw ArgumentError("puncture radius must be >= 1");
  const int n = g.num_vertices();
  for (int c : centers)
    if (c < 0 || c >= n) throw ArgumentError("center is not a vertex of the graph");
  PuncturedGraph p;
  p.r = r;
  p.d = d;
  p.centers = centers;

  std::vector<char> deleted(static_cast<std::size_t>(n), 0);
  std::vector<Ball> balls;
  balls.reserve(centers.size());
  for (int c : centers) {
    balls.push_back(ball(g, c, r));
    const Ball& b = balls.back();
    for (std::size_t i = 0; i < b.vertices.size(); ++i)
      if (b.distance[i] <= r - 1) deleted[static_cast<std::size_t>(b.vertices[i])] = 1;
  }
  for (int v = 0; v < n; ++v)
    if (!deleted[static_cast<std::size_t>(v)]) p.surviving.push_back(v);

  // How many centers' r-balls contain each vertex.
  std::vector<int> cover(static_cast<std::size_t>(n), 0);
  for (const Ball& b : balls)
    for (int v : b.vertices) cover[static_cast<std::size_t>(v)] += 1;

  std::vector<char> in_boundary(static_cast<std::size_t>(n), 0);
  std::vector<char> assigned(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Ball& b = balls[i];
    for (std::size_t j = 0; j < b.vertices.size(); ++j) {
      const int v = b.vertices[j];
      if (b.distance[j] == r && !deleted[static_cast<std::size_t>(v)]) in_boundary[static_cast<std::size_t>(v)] = 1;
    }
  }
  // A repeated center doubles its own cover count, so it is never isolated.
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Ball& b = balls[i];
    bool isolated = b.is_tree;
    for (int v : b.vertices)
      if (cover[static_cast<std::size_t>(v)] > 1) isolated = false;
    if (!isolated) continue;
    p.centers_prime.push_back(centers[i]);
    std::vector<int> w;
    for (std::size_t j = 0; j < b.vertices.size(); ++j) {
      if (b.distance[j] == r) {
        w.push_back(b.vertices[j]);
        assigned[static_cast<std::size_t>(b.vertices[j])] = 1;
      }
    }
    p.groups.push_back(std::move(w));
  }
  std::vector<int> rest;
  for (int v = 0; v < n; ++v)
    if (in_boundary[static_cast<std::size_t>(v)] && !assigned[static_cast<std::size_t>(v)]) rest.push_back(v);
  p.groups.push_back(std::move(rest));
  for (const auto& w : p.groups) p.boundary.insert(p.boundary.end(), w.begin(), w.end());

  p.surviving_degree.assign(static_cast<std::size_t>(n), -1);
  for (int v : p.surviving) p.surviving_degree[static_cast<std::size_t>(v)] = 0;
  for (const auto& e : g.edges()) {
    if (deleted[static_cast<std::size_t>(e.first)] || deleted[static_cast<std::size_t>(e.second)]) continue;
    p.surviving_degree[static_cast<std::size_t>(e.first)] += 1;
    p.surviving_degree[static_cast<std::size_t>(e.second)] += 1;
  }
  p.census.m = static_cast<std::int64_t>(p.surviving.size() - p.boundary.size());
  for (int v : p.boundary) {
    const int deg = p.surviving_degree[static_cast<std::size_t>(v)];
    if (deg == d - 1) {
      p.census.M1 += 1;
    } else if (deg == d - 2) {
      p.census.M2 += 1;
    } else {
      p.anomalies.push_back(v);
    }
  }
  return p;
}

PuncturedCensus census_for(const PuncturedGraph& p, const std::vector<std::uint8_t>& boundary_spins) {
  if (boundary_spins.size() != p.boundary.size()) throw ShapeError("boundary configuration length mismatch");
  PuncturedCensus c = p.census;
  c.L1 = 0;
  c.L2 = 0;
  for (std::size_t i = 0; i < p.boundary.size(); ++i) {
    if (!boundary_spins[i]) continue;
    const int deg = p.surviving_degree[static_cast<std::size_t>(p.boundary[i])];
    if (deg == p.d - 1) {
      c.L1 += 1;
    } else if (deg == p.d - 2) {
      c.L2 += 1;
    }
  }
  return c;
}

HalfEdgeGraph read_graph(std::istream& in) {
  HalfEdgeGraph g;
  std::string line;
  if (!std::getline(in, line)) throw ShapeError("graph file: missing header");
  {
    std::istringstream hs(line);
    if (!(hs >> g.n >> g.d) || g.n < 0 || g.d < 0) throw ShapeError("graph file: bad header");
  }
  const std::size_t m = static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.d);
  g.pairing.assign(m, -1);
  std::size_t pairs = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long i = 0, j = 0;
    if (!(ls >> i >> j)) throw ShapeError("graph file: bad pair line '" + line + "'");
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= m || static_cast<std::size_t>(j) >= m || i >= j)
      throw ShapeError("graph file: pair out of range or not ordered i < j");
    if (g.pairing[static_cast<std::size_t>(i)] != -1 || g.pairing[static_cast<std::size_t>(j)] != -1)
      throw ShapeError("graph file: half-edge paired twice");
    g.pairing[static_cast<std::size_t>(i)] = static_cast<int>(j);
    g.pairing[static_cast<std::size_t>(j)] = static_cast<int>(i);
    ++pairs;
  }
  if (2 * pairs != m) throw ShapeError("graph file: not every half-edge is paired");
  validate(g);
  return g;
}

void write_graph(std::ostream& out, const HalfEdgeGraph& g) {
  validate(g);
  out << g.n << ' ' << g.d << '\n';
  for (std::size_t i = 0; i < g.pairing.size(); ++i)
    if (static_cast<int>(i) < g.pairing[i]) out << i << ' ' << g.pairing[i] << '\n';
}

HalfEdgeGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open graph file " + path);
  return read_graph(in);
}

void write_graph_file(const std::string& path, const HalfEdgeGraph& g) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write graph file " + path);
  write_graph(out, g);
}

std::uint64_t graph_hash(const HalfEdgeGraph& g) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffu;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(g.n));
  mix(static_cast<std::uint64_t>(g.d));
  for (int v : g.pairing) mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(v)));
  return h;
}

}  // namespace hardcore
