#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hardcore/graph_lab.hpp"
#include "hardcore/model_core.hpp"
#include "hardcore/rng.hpp"

namespace hardcore {

using SpinConfig = std::vector<std::uint8_t>;

bool is_independent(const Graph& g, const SpinConfig& s);

struct Boundary {
  std::vector<int> vertices;
  std::vector<std::uint8_t> spins;
};

struct PartitionResult {
  double z = 0.0;
  double log_z = 0.0;              // -inf when z = 0
  std::vector<double> marginals;   // P(sigma_v = 1); fixed vertices report their spin
};

inline constexpr int kMaxEnumeratedVertices = 26;

// Subset enumeration when at most 26 vertices are free, forest DP otherwise.
PartitionResult brute_force_partition(const Graph& g, double lambda, const std::optional<Boundary>& boundary = {});
PartitionResult enumerate_partition(const Graph& g, double lambda, const std::optional<Boundary>& boundary = {});
PartitionResult forest_partition(const Graph& g, double lambda, const std::optional<Boundary>& boundary = {});

// Z_{G, sigma} for every sigma in {0,1}^watched (bit i = spin of watched[i]); 0 for non-independent sigma.
std::vector<double> partition_by_configuration(const Graph& g, double lambda, const std::vector<int>& watched);

class GlauberChain {
 public:
  GlauberChain(const Graph& g, double lambda, Rng rng);
  void step();
  void sweep();
  void sweeps(std::int64_t count);
  const SpinConfig& state() const { return state_; }
  std::int64_t occupied() const { return occupied_; }

 private:
  void set_spin(int v, std::uint8_t s);
  const Graph* g_;
  double p_occupy_;
  Rng rng_;
  SpinConfig state_;
  std::vector<int> blocked_;
  std::int64_t occupied_ = 0;
};

std::vector<SpinConfig> glauber_sample(const Graph& g, double lambda, std::int64_t sweeps, std::int64_t burn_in,
                                       Rng& rng, std::int64_t thin = 1);
// One-step heat-bath transition probability between two configurations.
double heat_bath_probability(const Graph& g, double lambda, const SpinConfig& from, const SpinConfig& to);

// Distribution over {0,1}^width keyed by bit patterns (bit i = position i).
struct Law {
  int width = 0;
  std::map<std::uint64_t, double> probs;

  double prob(std::uint64_t key) const;
  double total() const;
  Law marginal(const std::vector<int>& positions) const;
};

struct EmpiricalLaw {
  std::vector<int> support;
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t total = 0;

  explicit EmpiricalLaw(std::vector<int> support_vertices);
  void add(const SpinConfig& s);
  void merge(const EmpiricalLaw& other);
  Law normalized() const;
};

double tv_distance(const Law& a, const Law& b);
// Upper bound (K-1)/(2N) on the plug-in TV bias.
double tv_bias_bound(std::size_t support_size, std::uint64_t samples);

// Regular-tree ball: root has d children, every other vertex d-1; BFS order.
Graph tree_ball_graph(int d, int r);
Law tree_ball_law(const HardcoreParams& params, int r, std::size_t cap = std::size_t{1} << 20);

struct KappaNuReport {
  std::vector<int> boundary;
  std::vector<std::vector<int>> group_positions;  // positions into `boundary` per W_i
  std::map<std::uint64_t, double> kappa;           // allowed boundary configurations only
  std::vector<std::map<std::uint64_t, double>> factors;  // anchored kappa_i over W_i patterns
  double kappa_sigma0 = 0.0;
  double log_residual = 0.0;
  double isomorphic_max_diff = 0.0;  // across W_1..W_k of equal size
  std::size_t forbidden = 0;
  Law nu;
};

KappaNuReport kappa_and_nu(const Graph& g, const PuncturedGraph& p, double lambda);

struct PointToSetResult {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double alpha = 0.0;
  double occupation = 0.0;  // empirical P(sigma_u = 1) over the recorded samples
  std::int64_t samples = 0;
};

PointToSetResult point_to_set_estimate(const Graph& g, int u, int L, double lambda, std::int64_t samples, Rng& rng,
                                       std::int64_t burn_in_sweeps = 100);

}  // namespace hardcore
