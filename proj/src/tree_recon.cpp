#include "hardcore/tree_recon.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>

#include "hardcore/errors.hpp"

namespace hardcore {

namespace {

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

struct Kernel {
  double alpha, p01, p00, log_p01, log_p00, pi01;
};

Kernel make_kernel(const HardcoreParams& p) {
  const MarkovKernel k = markov_kernel(p);
  return Kernel{p.alpha, k.p01, k.p00, std::log(k.p01), std::log(k.p00), (1.0 - p.alpha) / p.alpha};
}

double eta_of_rho(double alpha, double rho) { return alpha * rho / (alpha * rho + 1.0 - alpha); }

}  // namespace

BroadcastSample broadcast_sample(const HardcoreParams& params, int depth, Rng& rng, std::uint64_t node_budget) {
  if (depth < 0) throw ArgumentError("depth must be nonnegative");
  const MarkovKernel k = markov_kernel(params);
  std::uint64_t nodes = 0, width = 1;
  for (int l = 0; l <= depth; ++l) {
    nodes += width;
    if (nodes > node_budget) throw ResourceError("broadcast tree exceeds the node budget");
    if (l < depth) {
      if (width > node_budget / static_cast<std::uint64_t>(params.d)) throw ResourceError("broadcast tree exceeds the node budget");
      width *= static_cast<std::uint64_t>(params.d);
    }
  }
  BroadcastSample s;
  s.d = params.d;
  s.depth = depth;
  s.levels.push_back({static_cast<std::uint8_t>(bernoulli(rng, params.alpha))});
  for (int l = 1; l <= depth; ++l) {
    const auto& prev = s.levels.back();
    std::vector<std::uint8_t> cur(prev.size() * static_cast<std::size_t>(params.d), 0);
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (prev[i]) continue;
      for (int c = 0; c < params.d; ++c)
        cur[i * static_cast<std::size_t>(params.d) + static_cast<std::size_t>(c)] = bernoulli(rng, k.p01);
    }
    s.levels.push_back(std::move(cur));
  }
  return s;
}

RootPosterior posterior_root(std::span<const std::uint8_t> leaves, const HardcoreParams& params) {
  const int d = params.d;
  if (d < 2) throw DomainError("d must be >= 2");
  if (!(params.alpha > 0.0)) throw DomainError("posterior_root needs alpha > 0");
  std::size_t width = 1;
  int depth = 0;
  while (width < leaves.size()) {
    width *= static_cast<std::size_t>(d);
    ++depth;
  }
  if (width != leaves.size()) throw ShapeError("leaf array length is not a power of d");
  const Kernel k = make_kernel(params);
  RootPosterior r;
  r.depth = depth;
  if (depth == 0) {
    r.p_root_one = leaves[0] ? 1.0 : 0.0;
  } else {
    // Per-node factor 1/(p01 rho + p00) handed to the parent, starting at the leaves.
    std::vector<double> factor(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) factor[i] = leaves[i] ? 0.0 : 1.0 / k.p00;
    for (int l = depth - 1; l >= 0; --l) {
      std::vector<double> up(factor.size() / static_cast<std::size_t>(d));
      for (std::size_t i = 0; i < up.size(); ++i) {
        double rho = 1.0;
        for (int c = 0; c < d; ++c) rho *= factor[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)];
        up[i] = l == 0 ? rho : 1.0 / (k.p01 * rho + k.p00);
      }
      factor = std::move(up);
    }
    r.p_root_one = eta_of_rho(k.alpha, factor[0]);
  }
  r.p_root_zero = 1.0 - r.p_root_one;
  r.x = (r.p_root_one / k.alpha - 1.0) / k.pi01;
  return r;
}

namespace {

struct LogAtom {
  double log_value;  // -inf encodes 0
  double weight;
};

// Sorts and merges atoms whose log values lie within tol; the merged value is weight-averaged.
std::vector<LogAtom> merge_atoms(std::vector<LogAtom> v, double tol) {
  std::sort(v.begin(), v.end(), [](const LogAtom& a, const LogAtom& b) { return a.log_value < b.log_value; });
  std::vector<LogAtom> out;
  for (const auto& a : v) {
    if (a.weight <= 0.0) continue;
    if (!out.empty()) {
      auto& b = out.back();
      const bool both_zero = b.log_value == -INFINITY && a.log_value == -INFINITY;
      if (both_zero || (std::isfinite(b.log_value) && a.log_value - b.log_value <= tol)) {
        if (!both_zero) b.log_value = (b.log_value * b.weight + a.log_value * a.weight) / (b.weight + a.weight);
        b.weight += a.weight;
        continue;
      }
    }
    out.push_back(a);
  }
  return out;
}

struct MergeState {
  double tol;
  std::size_t cap;
  bool approximate = false;
};

std::vector<LogAtom> merge_capped(std::vector<LogAtom> v, MergeState& st) {
  auto out = merge_atoms(std::move(v), st.tol);
  while (out.size() > st.cap) {
    st.approximate = true;
    st.tol *= 10.0;
    out = merge_atoms(std::move(out), st.tol);
  }
  return out;
}

std::vector<LogAtom> convolve(const std::vector<LogAtom>& a, const std::vector<LogAtom>& b, MergeState& st) {
  std::vector<LogAtom> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back({x.log_value + y.log_value, x.weight * y.weight});
  return merge_capped(std::move(out), st);
}

// Law of the log likelihood ratio at the root of a height-h subtree, under root spin 0.
std::vector<LogAtom> rho_law_root0(const Kernel& k, int d, int h, MergeState& st) {
  // Height 0 is handled by the caller through the child factor law.
  std::vector<LogAtom> child;  // law of log r for one child, parent spin 0
  child = {{-k.log_p00, k.p00}, {-INFINITY, k.p01}};
  std::vector<LogAtom> law;
  for (int level = 1; level <= h; ++level) {
    law = {{0.0, 1.0}};
    for (int c = 0; c < d; ++c) law = convolve(law, child, st);
    if (level == h) break;
    std::vector<LogAtom> next;
    next.reserve(law.size());
    for (const auto& a : law) {
      const double rho = a.log_value == -INFINITY ? 0.0 : std::exp(a.log_value);
      const double denom = k.p01 * rho + k.p00;
      next.push_back({-std::log(denom), a.weight * denom});
    }
    child = merge_capped(std::move(next), st);
  }
  return law;
}

}  // namespace

PosteriorAtoms posterior_atoms(const HardcoreParams& params, int depth, std::size_t atom_cap, double merge_tol) {
  if (depth < 0) throw ArgumentError("depth must be nonnegative");
  if (!(params.alpha > 0.0)) throw DomainError("posterior_atoms needs alpha > 0");
  PosteriorAtoms out;
  out.depth = depth;
  out.merge_tol = merge_tol;
  const double a = params.alpha;
  if (depth == 0) {
    out.atoms = {{0.0, 1.0 - a, 0.0, 1.0}, {1.0, a, 1.0, 0.0}};
    return out;
  }
  const Kernel k = make_kernel(params);
  MergeState st{merge_tol, atom_cap};
  const auto law = rho_law_root0(k, params.d, depth, st);
  for (const auto& at : law) {
    const double rho = at.log_value == -INFINITY ? 0.0 : std::exp(at.log_value);
    Atom x;
    x.eta = eta_of_rho(a, rho);
    x.w_root0 = at.weight;
    x.w_root1 = rho * at.weight;
    x.w_stat = a * x.w_root1 + (1.0 - a) * x.w_root0;
    out.atoms.push_back(x);
  }
  out.approximate = st.approximate;
  out.merge_tol = st.tol;
  return out;
}

MagnetizationStats xbar_from_atoms(const PosteriorAtoms& atoms, const HardcoreParams& params) {
  MagnetizationStats m;
  m.depth = atoms.depth;
  m.method = Method::exact;
  m.approximate = atoms.approximate;
  const double a = params.alpha;
  const double pi01 = (1.0 - a) / a;
  for (const auto& at : atoms.atoms) {
    const double x = (at.eta / a - 1.0) / pi01;
    m.xbar += at.w_stat * x * x;
    m.xbar1 += at.w_root1 * x * x;
    m.xbar0 += at.w_root0 * x * x;
    m.mean_x += at.w_stat * x;
    m.mean_x_root1 += at.w_root1 * x;
  }
  return m;
}

namespace {

struct McSums {
  std::array<double, 5> s{};
  std::array<double, 5> q{};
  std::int64_t n = 0;

  void add(const std::array<double, 5>& v) {
    for (std::size_t i = 0; i < 5; ++i) {
      s[i] += v[i];
      q[i] += v[i] * v[i];
    }
    ++n;
  }
  void merge(const McSums& o) {
    for (std::size_t i = 0; i < 5; ++i) {
      s[i] += o.s[i];
      q[i] += o.q[i];
    }
    n += o.n;
  }
  double mean(std::size_t i) const { return s[i] / static_cast<double>(n); }
  double stderr_of(std::size_t i) const {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double mu = s[i] / nn;
    return std::sqrt(std::max(0.0, (q[i] / nn - mu * mu) / (nn - 1.0)));
  }
};

// Samples a subtree of height h below a node with the given spin and returns the factor
// 1/(p01 rho + p00) passed to its parent (or rho itself when `root`).
double sample_factor(const Kernel& k, int d, int h, bool occupied, Rng& rng, bool root) {
  if (h == 0) return occupied ? 0.0 : 1.0 / k.p00;
  double rho = 1.0;
  for (int c = 0; c < d; ++c) {
    const bool child = !occupied && uniform01(rng) < k.p01;
    rho *= sample_factor(k, d, h - 1, child, rng, false);
  }
  return root ? rho : 1.0 / (k.p01 * rho + k.p00);
}

template <class Fn>
void run_chunks(std::int64_t total, int threads, std::uint64_t base_seed, Fn&& chunk_fn, std::vector<McSums>& out) {
  const std::int64_t chunks = std::min<std::int64_t>(64, std::max<std::int64_t>(1, total));
  out.assign(static_cast<std::size_t>(chunks), McSums{});
  auto work = [&](int worker, int nworkers) {
    for (std::int64_t c = worker; c < chunks; c += nworkers) {
      const std::int64_t lo = total * c / chunks, hi = total * (c + 1) / chunks;
      Rng rng = make_stream(base_seed, static_cast<std::uint64_t>(c));
      chunk_fn(hi - lo, rng, out[static_cast<std::size_t>(c)]);
    }
  };
  const int nw = std::max(1, threads);
  if (nw == 1) {
    work(0, 1);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) pool.emplace_back(work, w, nw);
  for (auto& t : pool) t.join();
}

}  // namespace

MagnetizationStats xbar(const HardcoreParams& params, int depth, Method method, std::int64_t samples, Rng& rng,
                        int threads) {
  if (depth < 0) throw ArgumentError("depth must be nonnegative");
  if (params.alpha == 0.0) {
    MagnetizationStats m;
    m.depth = depth;
    m.method = method;
    return m;
  }
  if (method == Method::exact) return xbar_from_atoms(posterior_atoms(params, depth), params);
  if (samples <= 0) throw ArgumentError("mc mode needs samples > 0");
  const Kernel k = make_kernel(params);
  const int d = params.d;
  const double a = params.alpha;
  const std::uint64_t base = rng();
  std::vector<McSums> parts;
  run_chunks(
      samples, threads, base,
      [&](std::int64_t count, Rng& r, McSums& acc) {
        for (std::int64_t i = 0; i < count; ++i) {
          const bool root = uniform01(r) < a;
          double eta;
          if (depth == 0) {
            eta = root ? 1.0 : 0.0;
          } else {
            eta = eta_of_rho(a, sample_factor(k, d, depth, root, r, true));
          }
          const double x = (eta / a - 1.0) / k.pi01;
          const double x2 = x * x;
          acc.add({x2, x2 * eta / a, x2 * (1.0 - eta) / (1.0 - a), x, x * eta / a});
        }
      },
      parts);
  McSums tot;
  for (const auto& p : parts) tot.merge(p);
  MagnetizationStats m;
  m.depth = depth;
  m.method = Method::mc;
  m.samples = samples;
  m.xbar = tot.mean(0);
  m.xbar1 = tot.mean(1);
  m.xbar0 = tot.mean(2);
  m.mean_x = tot.mean(3);
  m.mean_x_root1 = tot.mean(4);
  m.mc_stderr = tot.stderr_of(0);
  m.mc_stderr1 = tot.stderr_of(1);
  m.mc_stderr0 = tot.stderr_of(2);
  m.mean_x_stderr = tot.stderr_of(3);
  m.mean_x_root1_stderr = tot.stderr_of(4);
  return m;
}

double depth3_alpha(int d, double beta) {
  if (d < 3) throw DomainError("depth3_alpha needs d >= 3");
  const double l = std::log(static_cast<double>(d));
  return (l + std::log(l) - std::log(std::log(l)) - beta) / d;
}

namespace {

// Child log factors Y_j and binomial weights for the depth-3 computation under root spin 1.
struct ChildLaw {
  std::vector<double> y;
  std::vector<double> w;
};

ChildLaw depth3_child_law(const HardcoreParams& params) {
  const Kernel k = make_kernel(params);
  const int d = params.d;
  const double log_q = d * k.log_p00;
  const double q = std::exp(log_q);
  const double s = k.p01 + k.p00 * q;
  const double log_s = std::log(s);
  const double log_1ms = k.log_p00 + std::log1p(-q);
  // log r1 = -log(p01 p00^{-d} + p00)
  const double log_r1 = -log_add(k.log_p01 - log_q, k.log_p00);
  std::vector<double> logw(static_cast<std::size_t>(d) + 1);
  double mx = -INFINITY;
  for (int j = 0; j <= d; ++j) {
    logw[static_cast<std::size_t>(j)] = std::lgamma(d + 1.0) - std::lgamma(j + 1.0) - std::lgamma(d - j + 1.0) +
                                        j * log_s + (d - j) * log_1ms;
    mx = std::max(mx, logw[static_cast<std::size_t>(j)]);
  }
  ChildLaw law;
  double norm = 0.0;
  for (int j = 0; j <= d; ++j) {
    const double lw = logw[static_cast<std::size_t>(j)] - mx;
    if (lw < std::log(1e-30)) continue;
    const double log_rho2 = j * log_r1 - (d - j) * k.log_p00;
    law.y.push_back(-log_add(k.log_p01 + log_rho2, k.log_p00));
    law.w.push_back(std::exp(lw));
    norm += law.w.back();
  }
  for (double& w : law.w) w /= norm;
  return law;
}

}  // namespace

double depth3_expected_posterior_cf(const HardcoreParams& params) {
  const ChildLaw law = depth3_child_law(params);
  const int d = params.d;
  double mu = 0.0;
  for (std::size_t j = 0; j < law.y.size(); ++j) mu += law.w[j] * law.y[j];
  const double center = std::log(params.alpha / (1.0 - params.alpha)) + d * mu;
  // Im of exp(i t center) * phi_{Y - mu}(t)^d
  auto im_phi = [&](double t) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < law.y.size(); ++j) {
      const double u = t * (law.y[j] - mu);
      const double sh = std::sin(0.5 * u);
      re += law.w[j] * (-2.0 * sh * sh);
      im += law.w[j] * std::sin(u);
    }
    // log(1 + z) with z = re + i im, accurate for small |z|
    const double log_abs = 0.5 * std::log1p(2.0 * re + re * re + im * im);
    const double arg = std::atan2(im, 1.0 + re);
    const double mag = std::exp(d * log_abs);
    return mag * std::sin(d * arg + t * center);
  };
  auto integrand = [&](double t) { return im_phi(t) / std::sinh(std::numbers::pi * t); };
  double total = 0.0;
  // Integrand decays like exp(-pi t); split to keep the oscillatory part well resolved.
  const double period = 2.0 * std::numbers::pi / std::max(1.0, std::abs(center));
  const double upper = 14.0;
  const double step = std::min(0.5, 8.0 * period);
  for (double lo = 0.0; lo < upper; lo += step) {
    const double hi = std::min(upper, lo + step);
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 12, 1e-14);
  }
  return 0.5 + total;
}

Depth3Report depth3_check(const HardcoreParams& params, std::optional<double> beta) {
  if (!(params.alpha > 0.0)) throw DomainError("depth3_check needs alpha > 0");
  Depth3Report r;
  r.d = params.d;
  r.alpha = params.alpha;
  r.beta = beta;
  r.beta_warning = beta.has_value() && *beta <= kDepth3BetaMin;
  const double a = params.alpha;
  const double pi01 = (1.0 - a) / a;
  // Exact atoms are cheap while the d-fold product of d+1 child values stays small.
  if (params.d <= 8) {
    const auto atoms = posterior_atoms(params, 3);
    double e1 = 0.0;
    for (const auto& at : atoms.atoms) e1 += at.w_root1 * at.eta;
    r.expected_posterior_root1 = e1;
    r.method = "atoms";
  } else {
    r.expected_posterior_root1 = depth3_expected_posterior_cf(params);
    r.method = "characteristic-function";
  }
  // Lemma-c identity: E^1[X] = pi01 Xbar.
  r.xbar3 = (r.expected_posterior_root1 / a - 1.0) / (pi01 * pi01);
  r.passes = r.expected_posterior_root1 <= 0.5 && r.xbar3 <= a / 2.0;
  return r;
}

Depth3Scan depth3_scan(double beta, int d_start, int d_max) {
  if (d_start < 3 || d_max < d_start) throw ArgumentError("depth3 scan needs 3 <= d_start <= d_max");
  Depth3Scan scan;
  scan.beta = beta;
  for (long d = d_start; d <= d_max; d *= 2) {
    const int di = static_cast<int>(d);
    const double a = depth3_alpha(di, beta);
    if (!(a > 0.0 && a < 0.5)) continue;
    auto rep = depth3_check(params_from_alpha(di, a), beta);
    if (rep.passes && !scan.first_passing_d) scan.first_passing_d = di;
    scan.rows.push_back(rep);
  }
  return scan;
}

double contraction_coefficient(const HardcoreParams& params) {
  const double a = params.alpha;
  const double theta = -a / (1.0 - a);
  const double ratio = (1.0 - a) / (1.0 - 2.0 * a);
  return theta * theta * ratio * ratio * std::exp(a * params.d / 2.0) * params.d;
}

ContractionReport contraction_check(const HardcoreParams& params, int depth_max, std::int64_t samples, Rng& rng,
                                    int threads) {
  if (!(params.alpha < 0.5)) throw DomainError("contraction_check needs alpha < 1/2");
  if (depth_max < 1) throw ArgumentError("depth_max must be >= 1");
  ContractionReport rep;
  rep.c_star = contraction_coefficient(params);
  for (int n = 1; n <= depth_max; ++n) {
    ContractionRow row;
    row.depth = n;
    if (params.alpha > 0.0) {
      const auto m = xbar(params, n, Method::mc, samples, rng, threads);
      row.xbar = m.xbar;
      row.stderr_ = m.mc_stderr.value_or(0.0);
      const auto atoms = posterior_atoms(params, n, 20'000);
      if (!atoms.approximate) row.xbar_exact = xbar_from_atoms(atoms, params).xbar;
    } else {
      row.xbar_exact = 0.0;
    }
    rep.rows.push_back(row);
  }
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i];
    const auto& b = rep.rows[i + 1];
    ContractionRatio r;
    r.depth = a.depth;
    r.eligible = a.xbar <= params.alpha / 2.0;
    if (a.xbar > 0.0) {
      r.ratio = b.xbar / a.xbar;
      const double ra = a.stderr_ / a.xbar, rb = b.xbar > 0 ? b.stderr_ / b.xbar : 0.0;
      r.stderr_ = std::abs(r.ratio) * std::sqrt(ra * ra + rb * rb);
    }
    r.violation = r.eligible && a.xbar > 0.0 && r.ratio > rep.c_star + 3.0 * r.stderr_;
    rep.any_violation = rep.any_violation || r.violation;
    rep.ratios.push_back(r);
  }
  return rep;
}

}  // namespace hardcore
