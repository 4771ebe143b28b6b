#include "hardcore/report_io.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace hardcore {

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json matrix(const Matrix3& m) {
  Json out = Json::array();
  for (const auto& row : m) out.push_back(Json(std::vector<double>(row.begin(), row.end())));
  return out;
}

const char* method_name(Method m) { return m == Method::exact ? "exact" : "mc"; }

}  // namespace

Json to_json(const HardcoreParams& p) { return {{"d", p.d}, {"lambda", p.lambda}, {"alpha", p.alpha}}; }

Json to_json(const MarkovKernel& k) {
  return {{"p11", k.p11}, {"p10", k.p10}, {"p01", k.p01}, {"p00", k.p00}, {"second_eigenvalue", k.second_eigenvalue()}};
}

Json to_json(const DerivedConstants& c) { return {{"theta", c.theta}, {"pi01", c.pi01}, {"delta", c.delta}}; }

Json to_json(const ThresholdReport& r) {
  return {{"d", r.d},
          {"lambda_r_lower", num(r.lambda_r_lower)},
          {"lambda_r_upper", num(r.lambda_r_upper)},
          {"alpha_r_lower", num(r.alpha_r_lower)},
          {"alpha_r_upper", num(r.alpha_r_upper)},
          {"c_constant", r.c_constant},
          {"delta_d", num(r.delta_d)},
          {"alpha_c", num(r.alpha_c)},
          {"lambda_c", opt(r.lambda_c)},
          {"martin_bound", num(r.martin_bound)},
          {"alpha", opt(r.alpha)},
          {"kesten_stigum", opt(r.kesten_stigum)},
          {"small_d", r.small_d},
          {"asymptotic_guide", r.asymptotic_guide}};
}

Json to_json(const MagnetizationStats& s) {
  return {{"depth", s.depth},
          {"method", method_name(s.method)},
          {"xbar", s.xbar},
          {"xbar0", s.xbar0},
          {"xbar1", s.xbar1},
          {"mean_x", s.mean_x},
          {"mean_x_root1", s.mean_x_root1},
          {"stderr", opt(s.mc_stderr)},
          {"stderr0", opt(s.mc_stderr0)},
          {"stderr1", opt(s.mc_stderr1)},
          {"mean_x_stderr", opt(s.mean_x_stderr)},
          {"mean_x_root1_stderr", opt(s.mean_x_root1_stderr)},
          {"samples", s.samples},
          {"approximate", s.approximate}};
}

Json to_json(const PosteriorAtoms& a) {
  Json rows = Json::array();
  for (const auto& x : a.atoms)
    rows.push_back({{"eta", x.eta}, {"w_stat", x.w_stat}, {"w_root1", x.w_root1}, {"w_root0", x.w_root0}});
  return {{"depth", a.depth}, {"approximate", a.approximate}, {"merge_tol", a.merge_tol}, {"rows", rows}};
}

Json to_json(const Depth3Report& r) {
  return {{"d", r.d},
          {"alpha", r.alpha},
          {"beta", opt(r.beta)},
          {"expected_posterior_root1", r.expected_posterior_root1},
          {"xbar3", r.xbar3},
          {"passes", r.passes},
          {"beta_warning", r.beta_warning},
          {"method", r.method}};
}

Json to_json(const Depth3Scan& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) rows.push_back(to_json(r));
  return {{"beta", s.beta},
          {"first_passing_d", s.first_passing_d ? Json(*s.first_passing_d) : Json(nullptr)},
          {"rows", rows}};
}

Json to_json(const ContractionReport& r) {
  Json rows = Json::array();
  for (const auto& x : r.rows) {
    Json row = {{"depth", x.depth}, {"xbar", x.xbar}, {"stderr", x.stderr_}, {"xbar_exact", opt(x.xbar_exact)}};
    for (const auto& q : r.ratios) {
      if (q.depth != x.depth) continue;
      row["ratio"] = num(q.ratio);
      row["ratio_stderr"] = num(q.stderr_);
      row["eligible"] = q.eligible;
      row["violation"] = q.violation;
    }
    rows.push_back(row);
  }
  return {{"c_star", r.c_star}, {"any_violation", r.any_violation}, {"rows", rows}};
}

Json to_json(const OverlapPoint& p) { return {{"alpha", p.alpha}, {"gamma", p.gamma}, {"epsilon", p.epsilon}}; }

Json to_json(const AlphaStar& a) {
  return {{"alpha", a.alpha}, {"gamma", a.gamma}, {"epsilon", a.epsilon}, {"residual", a.residual}};
}

Json to_json(const MaxReport& r) {
  return {{"d", r.d},
          {"lambda", r.lambda},
          {"resolution", r.resolution},
          {"star", to_json(r.star)},
          {"grid_argmax", to_json(r.grid_argmax)},
          {"grid_max", num(r.grid_max)},
          {"f_star", num(r.f_star)},
          {"argmax_within_cell", r.argmax_within_cell},
          {"hessian", matrix(r.hessian)},
          {"hessian_fd", matrix(r.hessian_fd)},
          {"hessian_max_rel_diff", num(r.hessian_max_rel_diff)},
          {"eigenvalues", std::vector<double>(r.eigenvalues.begin(), r.eigenvalues.end())},
          {"negative_definite", r.negative_definite},
          {"decay_c_fit", num(r.decay_c_fit)},
          {"decay_c_min", num(r.decay_c_min)},
          {"grid_points", r.grid_points}};
}

Json to_json(const PuncturedCensus& c) {
  return {{"m", c.m}, {"M1", c.M1}, {"M2", c.M2}, {"L1", c.L1}, {"L2", c.L2}, {"K1", c.K1()}, {"K2", c.K2()}};
}

Json to_json(const LwcReport& r) {
  const auto& c = r.config;
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.per_center_tv.size(); ++i)
    rows.push_back({{"center", r.centers[i]}, {"tv", r.per_center_tv[i]}});
  return {{"config",
           {{"n", c.n}, {"d", c.d}, {"lambda", c.lambda}, {"r", c.r}, {"eps", c.eps},
            {"burn_in_sweeps", c.burn_in_sweeps}, {"samples", c.samples}, {"thin", c.thin},
            {"second_chain", c.second_chain}, {"seed", c.seed}}},
          {"graph_hash", r.graph_hash},
          {"graph_simple", r.graph_simple},
          {"centers_drawn", r.centers_drawn},
          {"centers_kept", r.centers_kept},
          {"few_centers", r.few_centers},
          {"samples", r.samples},
          {"median_tv", r.median_tv},
          {"mean_tv", r.mean_tv},
          {"max_tv", r.max_tv},
          {"fraction_above_eps", r.fraction_above_eps},
          {"aggregate_tv", r.aggregate_tv},
          {"median_inter_chain_tv", r.median_inter_chain_tv},
          {"tv_bias_bound", r.tv_bias_bound},
          {"occupied_lag1_autocorr", r.occupied_lag1_autocorr},
          {"rows", rows}};
}

Json to_json(const ReconScanReport& r) {
  const auto& c = r.config;
  Json rows = Json::array();
  for (const auto& x : r.rows) {
    Json row = to_json(x.stats);
    row["lambda"] = x.lambda;
    row["alpha"] = x.alpha;
    row["kesten_stigum"] = x.kesten_stigum;
    rows.push_back(row);
  }
  return {{"config",
           {{"d", c.d}, {"depth", c.depth}, {"lambdas", c.lambdas}, {"samples", c.samples},
            {"method", method_name(c.method)}, {"seed", c.seed}, {"threads", c.threads}}},
          {"thresholds", r.thresholds ? to_json(*r.thresholds) : Json(nullptr)},
          {"nondecreasing_within_3sigma", r.nondecreasing_within_3sigma},
          {"rows", rows}};
}

Json to_json(const MomentAuditReport& r) {
  const auto& c = r.config;
  return {{"config",
           {{"d", c.d}, {"lambda", c.lambda}, {"resolution", c.resolution}, {"identity_points", c.identity_points},
            {"stationarity_points", c.stationarity_points}, {"seed", c.seed}}},
          {"max", to_json(r.max)},
          {"identity_max_error", r.identity_max_error},
          {"stationarity_max_abs", r.stationarity_max_abs},
          {"second_derivative_negative", r.second_derivative_negative}};
}

Json to_json(const OracleReport& r) {
  Json rows = Json::array();
  for (const auto& c : r.checks) rows.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"all_passed", r.all_passed}, {"rows", rows}};
}

Json to_json(const PointToSetReport& r) {
  const auto& c = r.config;
  Json rows = Json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"L", x.L}, {"estimate", x.result.estimate}, {"stderr", x.result.stderr_},
                    {"alpha", x.result.alpha}, {"occupation", x.result.occupation}, {"samples", x.result.samples}});
  return {{"config",
           {{"graph_file", c.graph_file}, {"n", c.n}, {"d", c.d}, {"lambda", c.lambda}, {"u", c.u},
            {"radii", c.radii}, {"samples", c.samples}, {"burn_in_sweeps", c.burn_in_sweeps}, {"seed", c.seed}}},
          {"closed_form_l0", r.closed_form_l0},
          {"rows", rows}};
}

Json envelope(const std::string& command, Json config, Json result) {
  return {{"tool", "hardcore"}, {"version", kVersion}, {"command", command}, {"config", std::move(config)},
          {"result", std::move(result)}};
}

namespace {

std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  return v.dump();
}

void flatten(const Json& v, const std::string& prefix, Json& out) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      if (k == "rows") continue;
      flatten(x, prefix.empty() ? k : prefix + "." + k, out);
    }
  } else if (!v.is_array()) {
    out[prefix] = v;
  }
}

}  // namespace

std::string to_csv(const Json& result) {
  std::vector<Json> rows;
  if (result.is_object() && result.contains("rows") && result["rows"].is_array() && !result["rows"].empty()) {
    for (const auto& r : result["rows"]) {
      Json flat = Json::object();
      flatten(r, "", flat);
      rows.push_back(flat);
    }
  } else {
    Json flat = Json::object();
    flatten(result, "", flat);
    rows.push_back(flat);
  }
  std::set<std::string> cols;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.items()) cols.insert(k);
  std::ostringstream os;
  bool first = true;
  for (const auto& c : cols) {
    os << (first ? "" : ",") << c;
    first = false;
  }
  os << '\n';
  for (const auto& r : rows) {
    first = true;
    for (const auto& c : cols) {
      os << (first ? "" : ",") << (r.contains(c) ? cell(r[c]) : "");
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace hardcore
