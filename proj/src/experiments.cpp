#include "hardcore/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "hardcore/errors.hpp"
#include "hardcore/oracles.hpp"
#include <nlohmann/json.hpp>

namespace hardcore {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<int> distinct_uniform(int n, int k, Rng& rng) {
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  k = std::min(k, n);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
  }
  all.resize(static_cast<std::size_t>(k));
  return all;
}

struct ChainRun {
  std::vector<EmpiricalLaw> laws;
  double lag1 = 0.0;
};

ChainRun run_chain(const Graph& g, double lambda, const std::vector<std::vector<int>>& supports, std::int64_t burn_in,
                   std::int64_t samples, std::int64_t thin, Rng rng) {
  ChainRun out;
  for (const auto& s : supports) out.laws.emplace_back(s);
  GlauberChain chain(g, lambda, std::move(rng));
  chain.sweeps(burn_in);
  std::vector<double> occ;
  occ.reserve(static_cast<std::size_t>(samples));
  for (std::int64_t i = 0; i < samples; ++i) {
    chain.sweeps(thin);
    for (auto& law : out.laws) law.add(chain.state());
    occ.push_back(static_cast<double>(chain.occupied()));
  }
  if (occ.size() > 2) {
    const double mu = std::accumulate(occ.begin(), occ.end(), 0.0) / static_cast<double>(occ.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < occ.size(); ++i) {
      den += (occ[i] - mu) * (occ[i] - mu);
      if (i + 1 < occ.size()) num += (occ[i] - mu) * (occ[i + 1] - mu);
    }
    out.lag1 = den > 0 ? num / den : 0.0;
  }
  return out;
}

}  // namespace

LwcReport run_lwc_experiment(const LwcConfig& cfg) {
  if (cfg.n < 2 || cfg.d < 2) throw ArgumentError("lwc needs n >= 2 and d >= 2");
  if ((static_cast<std::int64_t>(cfg.n) * cfg.d) % 2 != 0) throw ArgumentError("n*d must be even");
  if (cfg.r < 1) throw ArgumentError("r must be >= 1");
  if (!(cfg.lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  LwcReport rep;
  rep.config = cfg;
  Rng rng = make_stream(cfg.seed, 0);
  const HalfEdgeGraph hg = sample_configuration_model(cfg.n, cfg.d, rng);
  rep.graph_hash = graph_hash(hg);
  rep.graph_simple = is_simple(hg);
  const Graph g = Graph::from_half_edges(hg);

  const HardcoreParams params = cfg.lambda > 0.0 ? params_from_lambda(cfg.d, cfg.lambda) : HardcoreParams{cfg.d, 0.0, 0.0};
  const Law tree = tree_ball_law(params, cfg.r);

  rep.centers_drawn = static_cast<int>(std::ceil(std::pow(static_cast<double>(cfg.n), 0.6) - 1e-9));
  const auto centers = distinct_uniform(cfg.n, rep.centers_drawn, rng);
  const PuncturedGraph p = puncture(g, centers, cfg.r, cfg.d);
  rep.centers = p.centers_prime;
  rep.centers_kept = static_cast<int>(p.centers_prime.size());
  rep.few_centers = rep.centers_kept < 10;
  if (rep.few_centers) std::cerr << "warning: only " << rep.centers_kept << " centers survived the filter\n";

  std::vector<std::vector<int>> supports;
  for (int s : p.centers_prime) supports.push_back(ball(g, s, cfg.r).vertices);
  const std::int64_t samples = cfg.samples > 0 ? cfg.samples : cfg.n;
  rep.samples = samples;
  const ChainRun a = run_chain(g, cfg.lambda, supports, cfg.burn_in_sweeps, samples, cfg.thin, make_stream(cfg.seed, 1));
  rep.occupied_lag1_autocorr = a.lag1;

  Law mixture;
  mixture.width = tree.width;
  for (const auto& law : a.laws) {
    const Law emp = law.normalized();
    const double tv = tv_distance(emp, tree);
    rep.per_center_tv.push_back(tv);
    for (const auto& [k, pr] : emp.probs) mixture.probs[k] += pr / static_cast<double>(a.laws.size());
  }
  if (!a.laws.empty()) {
    rep.median_tv = median_of(rep.per_center_tv);
    rep.mean_tv = std::accumulate(rep.per_center_tv.begin(), rep.per_center_tv.end(), 0.0) /
                  static_cast<double>(rep.per_center_tv.size());
    rep.max_tv = *std::max_element(rep.per_center_tv.begin(), rep.per_center_tv.end());
    rep.fraction_above_eps =
        static_cast<double>(std::count_if(rep.per_center_tv.begin(), rep.per_center_tv.end(),
                                          [&](double t) { return t > cfg.eps; })) /
        static_cast<double>(rep.per_center_tv.size());
    rep.aggregate_tv = tv_distance(mixture, tree);
  }
  rep.tv_bias_bound = tv_bias_bound(tree.probs.size(), static_cast<std::uint64_t>(samples));

  if (cfg.second_chain && !a.laws.empty()) {
    const ChainRun b = run_chain(g, cfg.lambda, supports, cfg.burn_in_sweeps, samples, cfg.thin, make_stream(cfg.seed, 2));
    std::vector<double> inter;
    for (std::size_t i = 0; i < a.laws.size(); ++i)
      inter.push_back(tv_distance(a.laws[i].normalized(), b.laws[i].normalized()));
    rep.median_inter_chain_tv = median_of(inter);
  }
  return rep;
}

ReconScanReport run_tree_recon_scan(const ReconScanConfig& cfg) {
  if (cfg.lambdas.empty()) throw ArgumentError("recon scan needs at least one lambda");
  ReconScanReport rep;
  rep.config = cfg;
  if (cfg.d >= 3) rep.thresholds = threshold_table(cfg.d);
  for (std::size_t i = 0; i < cfg.lambdas.size(); ++i) {
    const double lam = cfg.lambdas[i];
    const HardcoreParams p = params_from_lambda(cfg.d, lam);
    Rng rng = make_stream(cfg.seed, i);
    ReconScanRow row;
    row.lambda = lam;
    row.alpha = p.alpha;
    row.stats = xbar(p, cfg.depth, cfg.method, cfg.samples, rng, cfg.threads);
    const double theta = -p.alpha / (1.0 - p.alpha);
    row.kesten_stigum = theta * theta * cfg.d;
    rep.rows.push_back(row);
  }
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i].stats;
    const auto& b = rep.rows[i + 1].stats;
    const double sa = a.mc_stderr.value_or(0.0), sb = b.mc_stderr.value_or(0.0);
    const double tol = cfg.method == Method::mc ? 3.0 * std::hypot(sa, sb) : 1e-12;
    if (rep.rows[i + 1].lambda >= rep.rows[i].lambda && b.xbar < a.xbar - tol) rep.nondecreasing_within_3sigma = false;
  }
  return rep;
}

double identity_suite_max_error(int points, std::uint64_t seed) {
  Rng rng = make_stream(seed, 11);
  std::uniform_real_distribution<double> ua(0.001, 0.49), ul(std::log(0.05), std::log(50.0));
  std::uniform_int_distribution<int> ud(3, 1000);
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double a = ua(rng), lam = std::exp(ul(rng));
    const int d = ud(rng);
    const double f = f_point(OverlapPoint{a, a * a, a * (1.0 - 2.0 * a)}, lam, d);
    worst = std::max(worst, std::abs(2.0 * phi(a, lam, d) - f));
  }
  return worst;
}

std::pair<double, bool> stationarity_suite(int points, std::uint64_t seed) {
  Rng rng = make_stream(seed, 12);
  std::uniform_real_distribution<double> ua(0.01, 0.45), ug(0.02, 0.98), ul(std::log(0.1), std::log(10.0));
  std::uniform_int_distribution<int> ud(3, 100);
  double worst = 0.0;
  bool concave = true;
  for (int i = 0; i < points; ++i) {
    const double a = ua(rng);
    const double g = ug(rng) * a;
    const double lam = std::exp(ul(rng));
    const int d = ud(rng);
    const OverlapPoint p{a, g, eps_bar(a, g)};
    worst = std::max(worst, std::abs(df_deps_fd(p, lam, d)));
    if (!(d2f_deps2(p, d) < 0.0)) concave = false;
  }
  return {worst, concave};
}

MomentAuditReport run_moment_audit(const MomentAuditConfig& cfg) {
  MomentAuditReport rep;
  rep.config = cfg;
  rep.max = verify_global_max(cfg.lambda, cfg.d, cfg.resolution);
  rep.identity_max_error = identity_suite_max_error(cfg.identity_points, cfg.seed);
  const auto [stat, concave] = stationarity_suite(cfg.stationarity_points, cfg.seed);
  rep.stationarity_max_abs = stat;
  rep.second_derivative_negative = concave;
  return rep;
}

namespace {

std::string rational_str(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

template <class Fn>
void add_check(OracleReport& rep, const std::string& name, Fn&& fn) {
  OracleCheck c;
  c.name = name;
  try {
    c.detail = fn(c.passed);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("exception: ") + e.what();
  }
  rep.all_passed = rep.all_passed && c.passed;
  rep.checks.push_back(std::move(c));
}

}  // namespace

OracleReport run_oracle_suite(std::uint64_t seed, const std::vector<std::string>& corpus_files) {
  OracleReport rep;
  add_check(rep, "pairings.count", [](bool& ok) {
    ok = true;
    std::ostringstream os;
    for (int m = 2; m <= 12; m += 2) {
      PairingEnumerator en(m);
      std::uint64_t c = 0;
      while (en.next()) ++c;
      ok = ok && c == pairing_count(m);
      os << m << ":" << c << " ";
    }
    return os.str();
  });
  add_check(rep, "moments.first.exact", [](bool& ok) {
    ok = true;
    std::ostringstream os;
    const int cases[][3] = {{4, 3, 1}, {6, 2, 1}, {6, 2, 2}, {4, 2, 1}, {2, 3, 0}};
    for (const auto& c : cases) {
      const Rational lam(3, 2);
      const Rational formula = first_moment_rational(c[0], c[2], lam, c[1]);
      const Rational brute = oracle::first_moment_by_pairings(c[0], c[1], c[2], lam);
      ok = ok && formula == brute;
      os << "n=" << c[0] << ",d=" << c[1] << ",s=" << c[2] << ":" << rational_str(formula) << " ";
    }
    const Rational headline = first_moment_rational(4, 1, Rational(1), 3);
    ok = ok && headline == Rational(32, 11);
    return os.str();
  });
  add_check(rep, "moments.second.exact", [](bool& ok) {
    ok = true;
    std::ostringstream os;
    const int cases[][3] = {{4, 3, 1}, {6, 2, 2}, {4, 2, 1}, {6, 2, 1}};
    for (const auto& c : cases) {
      const int n = c[0], d = c[1], s = c[2];
      const Rational lam(2, 3);
      for (const auto& o : feasible_overlaps(n, s, d)) {
        const Rational a = second_moment_rational(n, s, o.t, o.k, lam, d);
        const Rational b = oracle::second_moment_term_by_pairings(n, d, s, o.t, o.k, lam);
        if (a != b) {
          ok = false;
          os << "term mismatch n=" << n << " t=" << o.t << " k=" << o.k << " ";
        }
      }
      const Rational sum = second_moment_sum_rational(n, s, lam, d);
      const Rational brute = oracle::second_moment_by_pairings(n, d, s, lam);
      ok = ok && sum == brute;
      os << "n=" << n << ",d=" << d << ",s=" << s << ":" << rational_str(sum) << " ";
    }
    return os.str();
  });
  add_check(rep, "moments.punctured.exact", [](bool& ok) {
    ok = true;
    std::ostringstream os;
    const int d = 3;
    const PuncturedCensus bases[] = {{2, 2, 0, 0, 0}, {2, 1, 2, 0, 0}, {1, 3, 1, 0, 0}};
    for (PuncturedCensus c : bases) {
      for (std::int64_t l1 = 0; l1 <= c.M1; ++l1) {
        for (std::int64_t l2 = 0; l2 <= c.M2; ++l2) {
          c.L1 = l1;
          c.L2 = l2;
          for (int s = 0; s <= c.m; ++s) {
            const std::int64_t nt = c.m * d + c.M1 * (d - 1) + c.M2 * (d - 2);
            const std::int64_t n1 = (d - 1) * l1 + (d - 2) * l2 + d * s;
            if (2 * n1 > nt) continue;
            const Rational lam(5, 4);
            const Rational a = punctured_first_moment_rational(c, s, lam, d);
            const Rational b = oracle::punctured_first_by_pairings(c, d, s, lam);
            if (a != b) {
              ok = false;
              os << "first mismatch m=" << c.m << " L=(" << l1 << "," << l2 << ") s=" << s << " ";
            }
            for (int t = 0; t <= s; ++t) {
              for (int k = 0; k <= (s - t) * d; ++k) {
                const Rational x = punctured_second_moment_rational(c, s, t, k, lam, d);
                const Rational y = oracle::punctured_second_term_by_pairings(c, d, s, t, k, lam);
                if (x != y) {
                  ok = false;
                  os << "second mismatch m=" << c.m << " L=(" << l1 << "," << l2 << ") s=" << s << " t=" << t
                     << " k=" << k << " ";
                }
              }
            }
          }
        }
      }
    }
    if (ok) os << "all census cases agree";
    return os.str();
  });
  add_check(rep, "gibbs.cycle4", [](bool& ok) {
    const Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    const double z = brute_force_partition(c4, 1.0).z;
    ok = z == 7.0;
    return "Z=" + std::to_string(z);
  });
  add_check(rep, "gibbs.forest-dp", [seed](bool& ok) {
    ok = true;
    Rng rng = make_stream(seed, 21);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + trial % 12;
      const Graph f = oracle::random_forest(n, 0.8, rng);
      std::optional<Boundary> b;
      if (trial % 3 == 0 && n > 1) {
        b = Boundary{{0}, {static_cast<std::uint8_t>(trial % 2)}};
      }
      const double lam = 0.3 + 0.1 * (trial % 20);
      const auto e = enumerate_partition(f, lam, b);
      const auto t = forest_partition(f, lam, b);
      worst = std::max(worst, std::abs(e.z - t.z) / std::max(1.0, e.z));
      for (int v = 0; v < n; ++v)
        worst = std::max(worst, std::abs(e.marginals[static_cast<std::size_t>(v)] - t.marginals[static_cast<std::size_t>(v)]));
    }
    ok = worst <= 1e-12;
    return "max deviation " + std::to_string(worst);
  });
  add_check(rep, "gibbs.detailed-balance", [](bool& ok) {
    const Graph p3(3, {{0, 1}, {1, 2}});
    const double lam = 1.7;
    std::vector<SpinConfig> states;
    for (int k = 0; k < 8; ++k) {
      SpinConfig s{static_cast<std::uint8_t>(k & 1), static_cast<std::uint8_t>((k >> 1) & 1),
                   static_cast<std::uint8_t>((k >> 2) & 1)};
      if (is_independent(p3, s)) states.push_back(s);
    }
    double worst = 0.0;
    for (const auto& x : states) {
      double row = 0.0;
      for (const auto& y : states) {
        const double px = std::pow(lam, std::count(x.begin(), x.end(), 1));
        const double py = std::pow(lam, std::count(y.begin(), y.end(), 1));
        worst = std::max(worst, std::abs(px * heat_bath_probability(p3, lam, x, y) - py * heat_bath_probability(p3, lam, y, x)));
        row += heat_bath_probability(p3, lam, x, y);
      }
      worst = std::max(worst, std::abs(row - 1.0));
    }
    ok = worst <= 1e-14;
    return "max imbalance " + std::to_string(worst);
  });
  add_check(rep, "tree.atoms-vs-enumeration", [](bool& ok) {
    ok = true;
    double worst = 0.0;
    const int cases[][2] = {{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}};
    for (const auto& c : cases) {
      for (double lam : {0.5, 1.0, 2.0}) {
        const HardcoreParams p = params_from_lambda(c[0], lam);
        const auto leaves = oracle::enumerate_leaf_laws(p, c[1]);
        const double pi01 = (1.0 - p.alpha) / p.alpha;
        double xb = 0.0;
        for (const auto& e : leaves) {
          const double x = (e.eta / p.alpha - 1.0) / pi01;
          xb += e.p_stat * x * x;
          const auto post = posterior_root(e.leaves, p);
          worst = std::max(worst, std::abs(post.p_root_one - e.eta));
        }
        const auto m = xbar_from_atoms(posterior_atoms(p, c[1]), p);
        worst = std::max(worst, std::abs(m.xbar - xb));
      }
    }
    ok = worst <= 1e-12;
    return "max deviation " + std::to_string(worst);
  });
  for (const auto& path : corpus_files) {
    add_check(rep, "corpus." + path, [&path](bool& ok) {
      const HalfEdgeGraph hg = read_graph_file(path);
      const Graph g = Graph::from_half_edges(hg);
      const auto full = brute_force_partition(g, 1.0);
      std::vector<int> watched;
      for (int v = 0; v < std::min(g.num_vertices(), 6); ++v) watched.push_back(v);
      const auto split = partition_by_configuration(g, 1.0, watched);
      const double z2 = std::accumulate(split.begin(), split.end(), 0.0);
      ok = std::abs(z2 - full.z) <= 1e-9 * full.z;
      if (g.is_forest()) ok = ok && std::abs(forest_partition(g, 1.0).z - full.z) <= 1e-9 * full.z;
      return "Z=" + std::to_string(full.z);
    });
  }
  return rep;
}

PointToSetReport run_point_to_set(const PointToSetConfig& cfg) {
  PointToSetReport rep;
  rep.config = cfg;
  Rng rng = make_stream(cfg.seed, 0);
  HalfEdgeGraph hg = cfg.graph_file.empty() ? sample_configuration_model(cfg.n, cfg.d, rng) : read_graph_file(cfg.graph_file);
  const Graph g = Graph::from_half_edges(hg);
  const double a = params_from_lambda(hg.d, cfg.lambda).alpha;
  rep.closed_form_l0 = 2.0 * a * (1.0 - a);
  for (std::size_t i = 0; i < cfg.radii.size(); ++i) {
    Rng r = make_stream(cfg.seed, 100 + i);
    PointToSetRow row;
    row.L = cfg.radii[i];
    row.result = point_to_set_estimate(g, cfg.u, row.L, cfg.lambda, cfg.samples, r, cfg.burn_in_sweeps);
    rep.rows.push_back(row);
  }
  return rep;
}

void write_sample_stream(const std::string& path, const std::vector<SpinConfig>& samples, std::uint64_t hash,
                         double lambda, std::uint64_t seed, std::int64_t sweeps) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  const std::size_t n = samples.empty() ? 0 : samples.front().size();
  out << n << ' ' << samples.size() << '\n';
  for (const auto& s : samples) {
    if (s.size() != n) throw ShapeError("samples differ in length");
    // Alternating run lengths, starting with a (possibly empty) run of zeros.
    std::uint8_t cur = 0;
    std::size_t run = 0;
    bool first = true;
    for (std::uint8_t b : s) {
      if (b == cur) {
        ++run;
        continue;
      }
      out << (first ? "" : " ") << run;
      first = false;
      cur = b;
      run = 1;
    }
    out << (first ? "" : " ") << run << '\n';
  }
  nlohmann::json side = {{"graph_hash", hash}, {"lambda", lambda}, {"seed", seed}, {"sweeps", sweeps},
                         {"vertices", n}, {"samples", samples.size()}, {"encoding", "rle-alternating-from-zero"}};
  std::ofstream js(path + ".json");
  js << side.dump(2) << '\n';
}

std::vector<SpinConfig> read_sample_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read " + path);
  std::size_t n = 0, count = 0;
  in >> n >> count;
  std::string line;
  std::getline(in, line);
  std::vector<SpinConfig> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw ShapeError("sample stream truncated");
    std::istringstream ls(line);
    SpinConfig s;
    std::uint8_t cur = 0;
    std::size_t run;
    while (ls >> run) {
      s.insert(s.end(), run, cur);
      cur ^= 1u;
    }
    if (s.size() != n) throw ShapeError("sample stream line has wrong length");
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace hardcore
