#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hardcore/gibbs_lab.hpp"
#include "hardcore/model_core.hpp"
#include "hardcore/moment_engine.hpp"
#include "hardcore/tree_recon.hpp"

namespace hardcore {

inline constexpr const char* kVersion = "0.1.0";

struct LwcConfig {
  int n = 1024;
  int d = 3;
  double lambda = 1.0;
  int r = 1;
  double eps = 0.05;
  std::int64_t burn_in_sweeps = 100;
  std::int64_t samples = 0;  // recorded configurations per chain; 0 means n
  std::int64_t thin = 1;     // sweeps between recorded configurations
  bool second_chain = true;
  std::uint64_t seed = 1;
};

struct LwcReport {
  LwcConfig config;
  std::uint64_t graph_hash = 0;
  bool graph_simple = false;
  int centers_drawn = 0;
  int centers_kept = 0;
  bool few_centers = false;
  std::int64_t samples = 0;
  std::vector<int> centers;
  std::vector<double> per_center_tv;
  double median_tv = 0.0;
  double mean_tv = 0.0;
  double max_tv = 0.0;
  double fraction_above_eps = 0.0;
  double aggregate_tv = 0.0;
  double median_inter_chain_tv = 0.0;
  double tv_bias_bound = 0.0;
  double occupied_lag1_autocorr = 0.0;
};

LwcReport run_lwc_experiment(const LwcConfig& config);

struct ReconScanConfig {
  int d = 3;
  int depth = 8;
  std::vector<double> lambdas;
  std::int64_t samples = 100'000;
  Method method = Method::mc;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct ReconScanRow {
  double lambda = 0.0;
  double alpha = 0.0;
  MagnetizationStats stats;
  double kesten_stigum = 0.0;
};

struct ReconScanReport {
  ReconScanConfig config;
  std::vector<ReconScanRow> rows;
  std::optional<ThresholdReport> thresholds;
  bool nondecreasing_within_3sigma = true;
};

ReconScanReport run_tree_recon_scan(const ReconScanConfig& config);

struct MomentAuditConfig {
  int d = 100;
  double lambda = 1.0;
  double resolution = 1e-3;
  int identity_points = 100;
  int stationarity_points = 200;
  std::uint64_t seed = 1;
};

struct MomentAuditReport {
  MomentAuditConfig config;
  MaxReport max;
  double identity_max_error = 0.0;     // |2 Phi - f(alpha, alpha^2, alpha(1-2alpha))|
  double stationarity_max_abs = 0.0;   // |df/deps| at eps_bar, finite differences
  bool second_derivative_negative = true;
};

MomentAuditReport run_moment_audit(const MomentAuditConfig& config);
double identity_suite_max_error(int points, std::uint64_t seed);
// Max |df/deps| at eps_bar and whether d2f/deps2 < 0 at every sampled point.
std::pair<double, bool> stationarity_suite(int points, std::uint64_t seed);

struct OracleCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool all_passed = true;
};

OracleReport run_oracle_suite(std::uint64_t seed, const std::vector<std::string>& corpus_files = {});

struct PointToSetConfig {
  std::string graph_file;  // empty: sample a configuration-model graph
  int n = 256;
  int d = 3;
  double lambda = 1.0;
  int u = 0;
  std::vector<int> radii{0, 1, 2};
  std::int64_t samples = 10'000;
  std::int64_t burn_in_sweeps = 100;
  std::uint64_t seed = 1;
};

struct PointToSetRow {
  int L = 0;
  PointToSetResult result;
};

struct PointToSetReport {
  PointToSetConfig config;
  double closed_form_l0 = 0.0;  // 2 alpha (1 - alpha)
  std::vector<PointToSetRow> rows;
};

PointToSetReport run_point_to_set(const PointToSetConfig& config);

// Run-length encoded sample stream with a JSON sidecar (graph hash, lambda, seed, sweeps).
void write_sample_stream(const std::string& path, const std::vector<SpinConfig>& samples, std::uint64_t graph_hash,
                         double lambda, std::uint64_t seed, std::int64_t sweeps);
std::vector<SpinConfig> read_sample_stream(const std::string& path);

}  // namespace hardcore
