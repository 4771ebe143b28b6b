#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardcore/model_core.hpp"
#include "hardcore/rng.hpp"

namespace hardcore {

// d-ary broadcast: level l has d^l spins, child c of node i sits at d*i + c.
struct BroadcastSample {
  int d = 0;
  int depth = 0;
  std::vector<std::vector<std::uint8_t>> levels;
};

BroadcastSample broadcast_sample(const HardcoreParams& params, int depth, Rng& rng,
                                 std::uint64_t node_budget = 100'000'000);

struct RootPosterior {
  double p_root_zero = 0.0;
  double p_root_one = 0.0;
  double x = 0.0;  // (p_root_one / alpha - 1) / pi01
  int depth = 0;
};

// Exact Bayes posterior of the root given a full leaf level.
RootPosterior posterior_root(std::span<const std::uint8_t> leaves, const HardcoreParams& params);

struct Atom {
  double eta = 0.0;
  double w_stat = 0.0;
  double w_root1 = 0.0;
  double w_root0 = 0.0;
};

struct PosteriorAtoms {
  int depth = 0;
  std::vector<Atom> atoms;  // sorted by eta
  bool approximate = false;
  double merge_tol = 0.0;   // on log likelihood ratio
};

PosteriorAtoms posterior_atoms(const HardcoreParams& params, int depth, std::size_t atom_cap = 100'000,
                               double merge_tol = 1e-12);

enum class Method { exact, mc };

struct MagnetizationStats {
  int depth = 0;
  Method method = Method::exact;
  double xbar = 0.0;
  double xbar0 = 0.0;
  double xbar1 = 0.0;
  double mean_x = 0.0;        // E_T[X]
  double mean_x_root1 = 0.0;  // E^1_T[X]
  std::optional<double> mc_stderr;
  std::optional<double> mc_stderr0;
  std::optional<double> mc_stderr1;
  std::optional<double> mean_x_stderr;
  std::optional<double> mean_x_root1_stderr;
  std::int64_t samples = 0;
  bool approximate = false;
};

MagnetizationStats xbar_from_atoms(const PosteriorAtoms& atoms, const HardcoreParams& params);
MagnetizationStats xbar(const HardcoreParams& params, int depth, Method method, std::int64_t samples, Rng& rng,
                        int threads = 1);

// alpha = (ln d + lnln d - lnlnln d - beta) / d
double depth3_alpha(int d, double beta);
inline constexpr double kDepth3BetaMin = 1.0596781;  // ln 2 - lnln 2

struct Depth3Report {
  int d = 0;
  double alpha = 0.0;
  std::optional<double> beta;
  double expected_posterior_root1 = 0.0;
  double xbar3 = 0.0;
  bool passes = false;
  bool beta_warning = false;
  std::string method;  // "atoms" or "characteristic-function"
};

Depth3Report depth3_check(const HardcoreParams& params, std::optional<double> beta = std::nullopt);
// Same quantity through the characteristic-function route regardless of d.
double depth3_expected_posterior_cf(const HardcoreParams& params);

struct Depth3Scan {
  double beta = 0.0;
  std::vector<Depth3Report> rows;
  std::optional<int> first_passing_d;
};

Depth3Scan depth3_scan(double beta, int d_start = 16, int d_max = 1'000'000);

struct ContractionRow {
  int depth = 0;
  double xbar = 0.0;
  double stderr_ = 0.0;
  std::optional<double> xbar_exact;
};

struct ContractionRatio {
  int depth = 0;  // ratio X(depth+1)/X(depth)
  double ratio = 0.0;
  double stderr_ = 0.0;
  bool eligible = false;  // X(depth) <= alpha/2
  bool violation = false; // eligible and ratio > c* + 3 stderr
};

struct ContractionReport {
  double c_star = 0.0;
  std::vector<ContractionRow> rows;
  std::vector<ContractionRatio> ratios;
  bool any_violation = false;
};

double contraction_coefficient(const HardcoreParams& params);
ContractionReport contraction_check(const HardcoreParams& params, int depth_max, std::int64_t samples, Rng& rng,
                                    int threads = 1);

}  // namespace hardcore
