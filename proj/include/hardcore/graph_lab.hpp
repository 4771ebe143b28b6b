#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hardcore/moment_engine.hpp"
#include "hardcore/rng.hpp"

namespace hardcore {

// Configuration-model multigraph: half-edge i belongs to vertex i / d.
struct HalfEdgeGraph {
  int n = 0;
  int d = 0;
  std::vector<int> pairing;

  int vertex_of(int half_edge) const { return half_edge / d; }
};

// Throws ShapeError unless pairing is a fixed-point-free involution of size n*d.
void validate(const HalfEdgeGraph& g);

HalfEdgeGraph sample_configuration_model(int n, int d, Rng& rng);
// Whole-matching sampler (shuffle, then pair consecutive entries); same law as the sequential one.
HalfEdgeGraph sample_configuration_model_shuffled(int n, int d, Rng& rng);
bool is_simple(const HalfEdgeGraph& g);

// Odd double factorial (m-1)!! for even m.
std::uint64_t pairing_count(int half_edges);

// Lexicographic walk over all perfect matchings of n*d half-edges (n*d <= 16).
class PairingEnumerator {
 public:
  PairingEnumerator(int n, int d);
  // Matchings of an arbitrary even number of half-edges (at most 16).
  explicit PairingEnumerator(int half_edges) : PairingEnumerator(half_edges, 1) {}
  bool next();
  const std::vector<int>& pairing() const { return pairing_; }
  HalfEdgeGraph graph() const { return HalfEdgeGraph{n_, d_, pairing_}; }

 private:
  void fill_from(int level);
  int n_;
  int d_;
  int levels_;
  bool started_ = false;
  std::vector<int> pairing_;
  std::vector<int> low_;
  std::vector<int> partner_;
};

// Multigraph with loops; distinct-neighbor lists drive the hardcore constraint.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<std::pair<int, int>> edges);
  static Graph from_half_edges(const HalfEdgeGraph& g);

  int num_vertices() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  bool has_loop(int v) const { return loop_[static_cast<std::size_t>(v)] != 0; }
  int degree(int v) const { return degree_[static_cast<std::size_t>(v)]; }
  bool has_parallel_edges() const { return parallel_; }
  bool has_loops() const;
  bool is_forest() const;
  bool is_simple() const { return !parallel_ && !has_loops(); }
  Graph induced(const std::vector<int>& keep) const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<char> loop_;
  std::vector<int> degree_;
  bool parallel_ = false;
};

struct Ball {
  std::vector<int> vertices;  // BFS order, neighbors visited in increasing id
  std::vector<int> distance;  // parallel to vertices
  Graph induced;              // on `vertices`, relabeled 0..|B|-1 in BFS order
  bool is_tree = false;
};

Ball ball(const Graph& g, int v, int r);
// Vertices at distance exactly r, in BFS order.
std::vector<int> sphere(const Graph& g, int v, int r);

struct PuncturedGraph {
  int r = 0;
  int d = 0;
  std::vector<int> centers;
  std::vector<int> centers_prime;
  std::vector<int> surviving;              // sorted
  std::vector<int> boundary;               // W_1, ..., W_k, W_{k+1} concatenated
  std::vector<std::vector<int>> groups;    // W_1..W_k then W_{k+1} (possibly empty)
  std::vector<int> surviving_degree;       // per original vertex, -1 when deleted
  std::vector<int> anomalies;              // boundary vertices with degree outside {d-1, d-2}
  PuncturedCensus census;                  // at the all-unoccupied boundary configuration
};

PuncturedGraph puncture(const Graph& g, const std::vector<int>& centers, int r, int d);
// Census with L1/L2 filled in from a boundary configuration (spins parallel to `boundary`).
PuncturedCensus census_for(const PuncturedGraph& p, const std::vector<std::uint8_t>& boundary_spins);

HalfEdgeGraph read_graph(std::istream& in);
void write_graph(std::ostream& out, const HalfEdgeGraph& g);
HalfEdgeGraph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const HalfEdgeGraph& g);
std::uint64_t graph_hash(const HalfEdgeGraph& g);

}  // namespace hardcore
