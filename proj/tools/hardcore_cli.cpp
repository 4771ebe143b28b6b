#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hardcore/errors.hpp"
#include "hardcore/experiments.hpp"
#include "hardcore/report_io.hpp"

using namespace hardcore;

namespace {

struct Output {
  std::string path;
  std::string format = "json";
};

void emit(const Output& o, const std::string& command, Json config, Json result) {
  std::string text;
  if (o.format == "csv") {
    text = to_csv(result);
  } else {
    text = envelope(command, std::move(config), std::move(result)).dump(2) + "\n";
  }
  if (o.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.path);
  if (!f) throw ResourceError("cannot open output file " + o.path);
  f << text;
}

std::vector<std::string> corpus_in(const std::string& dir) {
  std::vector<std::string> files;
  if (dir.empty()) return files;
  if (!std::filesystem::is_directory(dir)) throw ArgumentError("not a directory: " + dir);
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".graph") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardcore model on random regular graphs: thresholds, tree reconstruction, moments, sampling"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Output out;
  std::uint64_t seed = 1;
  int threads = 1;
  app.add_option("--out", out.path, "Write the report to this file instead of stdout");
  app.add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "Base RNG seed");
  app.add_option("--threads", threads, "Worker threads for Monte Carlo")->check(CLI::PositiveNumber);

  int d = 3;
  double lambda = 1.0;
  std::optional<double> alpha;

  auto* params = app.add_subcommand("params", "Density, kernel and derived constants");
  params->add_option("-d", d)->required();
  auto* p_lam = params->add_option("--lambda", lambda);
  params->add_option("--alpha", alpha)->excludes(p_lam);

  double c_const = 3.01;
  auto* thr = app.add_subcommand("thresholds", "Threshold table for a degree");
  thr->add_option("-d", d)->required();
  thr->add_option("--alpha", alpha);
  thr->add_option("--c", c_const, "Constant in the correction term of alpha_c");

  ReconScanConfig recon;
  std::string method = "mc";
  auto* tr = app.add_subcommand("tree-recon", "Mean squared magnetization on the broadcast tree");
  tr->add_option("-d", recon.d)->required();
  tr->add_option("--depth", recon.depth);
  tr->add_option("--lambda", recon.lambdas, "One or more fugacities")->required();
  tr->add_option("--samples", recon.samples);
  tr->add_option("--method", method)->check(CLI::IsMember({"exact", "mc"}));

  double beta = 1.2;
  int d_start = 16, d_max = 1'000'000;
  std::optional<int> d3_single;
  auto* d3 = app.add_subcommand("depth3", "Depth-3 posterior check at alpha = (ln d + lnln d - lnlnln d - beta)/d");
  d3->add_option("--beta", beta);
  d3->add_option("-d", d3_single, "Check a single degree instead of scanning");
  d3->add_option("--d-start", d_start);
  d3->add_option("--d-max", d_max);

  int contraction_depth = 0;
  auto* ct = app.add_subcommand("contraction", "Per-depth contraction ratios against c*");
  ct->add_option("-d", d)->required();
  ct->add_option("--lambda", lambda)->required();
  ct->add_option("--depth", contraction_depth)->required();
  std::int64_t ct_samples = 100'000;
  ct->add_option("--samples", ct_samples);

  int n = 0, s = 0, t = -1, k = -1;
  auto* mo = app.add_subcommand("moments", "Exact finite-n first and second moments");
  mo->add_option("-n", n)->required();
  mo->add_option("-d", d)->required();
  mo->add_option("-s", s, "Number of occupied vertices")->required();
  mo->add_option("--lambda", lambda)->required();
  mo->add_option("-t", t, "Overlap |S n T| (second moment term)");
  mo->add_option("-k", k, "Half-edges of S minus T matched to the complement");

  MomentAuditConfig audit;
  auto* mv = app.add_subcommand("max-verify", "Global maximum of the second-moment exponent");
  mv->add_option("-d", audit.d)->required();
  mv->add_option("--lambda", audit.lambda)->required();
  mv->add_option("--resolution", audit.resolution);
  mv->add_option("--identity-points", audit.identity_points);
  mv->add_option("--stationarity-points", audit.stationarity_points);

  LwcConfig lwc;
  auto* lw = app.add_subcommand("lwc", "Local weak convergence to the tree measure");
  lw->add_option("-n", lwc.n)->required();
  lw->add_option("-d", lwc.d);
  lw->add_option("--lambda", lwc.lambda);
  lw->add_option("-r", lwc.r)->check(CLI::Range(1, 2));
  lw->add_option("--eps", lwc.eps);
  lw->add_option("--burn-in", lwc.burn_in_sweeps, "Burn-in sweeps");
  lw->add_option("--samples", lwc.samples, "Recorded configurations (0: n)");
  lw->add_option("--thin", lwc.thin);
  lw->add_flag("!--single-chain", lwc.second_chain, "Skip the second chain");

  PointToSetConfig pts;
  auto* ps = app.add_subcommand("point-to-set", "Point-to-set estimates on a graph");
  ps->add_option("--graph", pts.graph_file);
  ps->add_option("-n", pts.n);
  ps->add_option("-d", pts.d);
  ps->add_option("--lambda", pts.lambda);
  ps->add_option("-u", pts.u);
  ps->add_option("-L", pts.radii);
  ps->add_option("--samples", pts.samples);
  ps->add_option("--burn-in", pts.burn_in_sweeps);

  std::string corpus;
  auto* orc = app.add_subcommand("oracle", "Cross-check closed forms against brute-force references");
  orc->add_option("--corpus", corpus, "Directory of .graph files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*params) {
      const HardcoreParams p = alpha ? params_from_alpha(d, *alpha) : params_from_lambda(d, lambda);
      Json r = {{"params", to_json(p)}, {"kernel", to_json(markov_kernel(p))},
                {"derived", to_json(derived_constants(p))}};
      emit(out, "params", {{"d", d}, {"lambda", lambda}, {"alpha", alpha ? Json(*alpha) : Json(nullptr)}}, r);
    } else if (*thr) {
      emit(out, "thresholds", {{"d", d}, {"c", c_const}}, to_json(threshold_table(d, alpha, c_const)));
    } else if (*tr) {
      recon.method = method == "exact" ? Method::exact : Method::mc;
      recon.seed = seed;
      recon.threads = threads;
      const auto rep = run_tree_recon_scan(recon);
      Json j = to_json(rep);
      emit(out, "tree-recon", j["config"], j);
    } else if (*d3) {
      if (d3_single) {
        const HardcoreParams p = params_from_alpha(*d3_single, depth3_alpha(*d3_single, beta));
        emit(out, "depth3", {{"d", *d3_single}, {"beta", beta}}, to_json(depth3_check(p, beta)));
      } else {
        emit(out, "depth3", {{"beta", beta}, {"d_start", d_start}, {"d_max", d_max}},
             to_json(depth3_scan(beta, d_start, d_max)));
      }
    } else if (*ct) {
      const HardcoreParams p = params_from_lambda(d, lambda);
      Rng rng = make_stream(seed, 0);
      emit(out, "contraction", {{"d", d}, {"lambda", lambda}, {"depth", contraction_depth}, {"samples", ct_samples}},
           to_json(contraction_check(p, contraction_depth, ct_samples, rng, threads)));
    } else if (*mo) {
      Json r = {{"log_first_moment", first_moment_log(n, s, lambda, d)}};
      if (t >= 0 && k >= 0) r["log_second_moment_term"] = second_moment_log(n, s, t, k, lambda, d);
      r["log_second_moment"] = second_moment_sum_log(n, s, lambda, d);
      if (n > 0) r["phi"] = phi(static_cast<double>(s) / n, lambda, d);
      emit(out, "moments", {{"n", n}, {"d", d}, {"s", s}, {"lambda", lambda}, {"t", t}, {"k", k}}, r);
    } else if (*mv) {
      audit.seed = seed;
      Json j = to_json(run_moment_audit(audit));
      emit(out, "max-verify", j["config"], j);
    } else if (*lw) {
      lwc.seed = seed;
      Json j = to_json(run_lwc_experiment(lwc));
      emit(out, "lwc", j["config"], j);
    } else if (*ps) {
      pts.seed = seed;
      Json j = to_json(run_point_to_set(pts));
      emit(out, "point-to-set", j["config"], j);
    } else if (*orc) {
      const auto rep = run_oracle_suite(seed, corpus_in(corpus));
      emit(out, "oracle", {{"seed", seed}, {"corpus", corpus}}, to_json(rep));
      if (!rep.all_passed) return 4;
    }
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
