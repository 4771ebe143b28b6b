#include "hardcore/moment_engine.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hardcore/errors.hpp"
#include "hardcore/model_core.hpp"

namespace hardcore {

namespace {

using BigInt = boost::multiprecision::cpp_int;
// Finite differences divide by tiny steps near the faces of R; 50 digits keeps roundoff out of the way.
using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>, boost::multiprecision::et_off>;

template <class T>
T xlx(T x) {
  using std::log;
  return x > T(0) ? T(x * log(x)) : T(0);
}

template <class T>
T int_log_lin(T c, T t) {  // integral_0^t ln(c - x) dx
  return xlx(c) - xlx(c - t) - t;
}

template <class T>
T int_log_lin2(T c, T t) {  // integral_0^t ln(c - 2x) dx
  return (xlx(c) - xlx(c - 2 * t)) / 2 - t;
}

template <class T>
T h_fn(T x) {
  return -xlx(x) - xlx(T(1) - x);
}

template <class T>
T h1_fn(T x, T y) {
  return xlx(y) - xlx(x) - xlx(y - x);
}

template <class T>
T f_impl(T a, T g, T e, T log_lambda, int d) {
  const T one(1);
  const T psi2 = h1_fn(e, a - g) + int_log_lin(one - 2 * a + g, g) - int_log_lin2(one, g) +
                 int_log_lin(one - 2 * a, e) + int_log_lin(a - g, a - g - e) -
                 int_log_lin2(one - 2 * g, a - g) + int_log_lin(one - 2 * a - e, e) -
                 int_log_lin2(one - 2 * a, e);
  const T lam_term = a > T(0) ? 2 * a * log_lambda : T(0);
  return lam_term + h_fn(a) + h1_fn(g, a) + h1_fn(a - g, one - a) + T(d) * psi2;
}

// Log-domain product accumulator with Neumaier compensation.
class LogAcc {
 public:
  explicit LogAcc(double lambda) : log_lambda_(lambda > 0 ? std::log(lambda) : -INFINITY) {}

  void mul_int(std::int64_t x) {
    if (zero_) return;
    if (x <= 0) {
      zero_ = true;
      return;
    }
    add(std::log(static_cast<double>(x)));
  }
  void div_int(std::int64_t x) {
    if (zero_) return;
    if (x <= 0) throw std::logic_error("nonpositive denominator in pairing product");
    add(-std::log(static_cast<double>(x)));
  }
  void mul_binom(std::int64_t n, std::int64_t k) {
    if (zero_) return;
    if (k < 0 || k > n) {
      zero_ = true;
      return;
    }
    add(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
  }
  void mul_lambda_pow(std::int64_t e) {
    if (zero_ || e == 0) return;
    if (!std::isfinite(log_lambda_)) {
      zero_ = true;
      return;
    }
    add(e * log_lambda_);
  }
  bool zero() const { return zero_; }
  double value() const { return zero_ ? -INFINITY : sum_ + comp_; }

 private:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double log_lambda_;
  double sum_ = 0.0;
  double comp_ = 0.0;
  bool zero_ = false;
};

class RatAcc {
 public:
  explicit RatAcc(const Rational& lambda) : lambda_(lambda) {}

  void mul_int(std::int64_t x) {
    if (zero_) return;
    if (x <= 0) {
      zero_ = true;
      return;
    }
    num_ *= x;
  }
  void div_int(std::int64_t x) {
    if (zero_) return;
    if (x <= 0) throw std::logic_error("nonpositive denominator in pairing product");
    den_ *= x;
  }
  void mul_binom(std::int64_t n, std::int64_t k) {
    if (zero_) return;
    if (k < 0 || k > n) {
      zero_ = true;
      return;
    }
    for (std::int64_t i = 0; i < k; ++i) {
      num_ *= (n - i);
      den_ *= (i + 1);
    }
  }
  void mul_lambda_pow(std::int64_t e) {
    if (zero_) return;
    for (std::int64_t i = 0; i < e; ++i) {
      num_ *= numerator(lambda_);
      den_ *= denominator(lambda_);
    }
  }
  Rational value() const { return zero_ ? Rational(0) : Rational(num_, den_); }

 private:
  Rational lambda_;
  BigInt num_ = 1;
  BigInt den_ = 1;
  bool zero_ = false;
};

template <class Acc>
void falling(Acc& acc, std::int64_t x, std::int64_t m) {
  for (std::int64_t i = 0; i < m; ++i) acc.mul_int(x - i);
}

// Probability denominator for pairing m half-edges sequentially out of x free ones.
template <class Acc>
void pairing_den(Acc& acc, std::int64_t x, std::int64_t m) {
  for (std::int64_t i = 0; i < m; ++i) acc.div_int(x - 1 - 2 * i);
}

// Probability that, among nt half-edges, a block of g half-edges pairs into a pool of c,
// then a block of a half-edges sends exactly k into the remaining pool and a - k into a
// second block of a half-edges, whose remaining k then pair into the pool.
template <class Acc>
void overlap_pairing(Acc& acc, std::int64_t c, std::int64_t g, std::int64_t a, std::int64_t k,
                     std::int64_t nt) {
  falling(acc, c, g);
  pairing_den(acc, nt, g);
  const std::int64_t c1 = c - g;
  const std::int64_t r1 = nt - 2 * g;
  acc.mul_binom(a, k);
  falling(acc, c1, k);
  falling(acc, a, a - k);
  pairing_den(acc, r1, a);
  falling(acc, c1 - k, k);
  pairing_den(acc, c1, k);
}

void check_nd(int n, int d) {
  if (n < 1 || d < 1) throw ArgumentError("n and d must be positive");
  if ((static_cast<std::int64_t>(n) * d) % 2 != 0) throw ArgumentError("n*d must be even");
}

template <class Acc>
void first_moment_terms(Acc& acc, int n, int s, int d) {
  acc.mul_binom(n, s);
  acc.mul_lambda_pow(s);
  const std::int64_t nd = static_cast<std::int64_t>(n) * d;
  const std::int64_t sd = static_cast<std::int64_t>(s) * d;
  falling(acc, nd - sd, sd);
  pairing_den(acc, nd, sd);
}

void check_overlap_counts(int n, int s, int t, int k, int d) {
  if (s < 0 || t < 0 || k < 0) throw DomainError("overlap counts must be nonnegative");
  if (2 * s > n) throw DomainError("alpha > 1/2");
  if (t > s) throw DomainError("gamma > alpha");
  if (k > static_cast<std::int64_t>(s - t) * d) throw DomainError("alpha - gamma - epsilon < 0");
  if (static_cast<std::int64_t>(n) * d - 2LL * s * d - 2LL * k < 0)
    throw DomainError("1 - 2 alpha - 2 epsilon < 0");
}

template <class Acc>
void second_moment_terms(Acc& acc, int n, int s, int t, int k, int d) {
  acc.mul_lambda_pow(2LL * s);
  acc.mul_binom(n, s);
  acc.mul_binom(s, t);
  acc.mul_binom(n - s, s - t);
  const std::int64_t dd = d;
  overlap_pairing(acc, (n - 2LL * s + t) * dd, t * dd, (s - t) * dd, k, n * dd);
}

std::int64_t census_half_edges(const PuncturedCensus& c, int d) {
  return c.m * d + c.M1 * (d - 1) + c.M2 * (d - 2);
}

template <class Acc>
void punctured_first_terms(Acc& acc, const PuncturedCensus& c, int s, int d) {
  const std::int64_t nt = census_half_edges(c, d);
  const std::int64_t n1 = (d - 1) * c.L1 + (d - 2) * c.L2 + static_cast<std::int64_t>(d) * s;
  if (2 * n1 > nt) throw DomainError("infeasible census: N1 > N_T/2");
  acc.mul_lambda_pow(c.L1 + c.L2 + s);
  acc.mul_binom(c.m, s);
  falling(acc, nt - n1, n1);
  pairing_den(acc, nt, n1);
}

template <class Acc>
void punctured_second_terms(Acc& acc, const PuncturedCensus& c, int s, int t, int k, int d) {
  if (t > s || t < 0 || k < 0 || k > static_cast<std::int64_t>(s - t) * d)
    throw DomainError("overlap counts outside the feasible region");
  const std::int64_t l_hat = (d - 1) * c.L1 + (d - 2) * c.L2;
  const std::int64_t k_hat = (d - 1) * c.K1() + (d - 2) * c.K2();
  acc.mul_lambda_pow(2LL * s + 2LL * (c.L1 + c.L2));
  acc.mul_binom(c.m, s);
  acc.mul_binom(s, t);
  acc.mul_binom(c.m - s, s - t);
  const std::int64_t dd = d;
  overlap_pairing(acc, (c.m - 2LL * s + t) * dd + k_hat, t * dd + l_hat, (s - t) * dd, k,
                  census_half_edges(c, d));
}

int to_count(double x, const char* what) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x)))
    throw ArgumentError(std::string(what) + " is not an integer count");
  return static_cast<int>(r);
}

}  // namespace

void check_region(const OverlapPoint& p) {
  const double tol = 1e-14;
  auto fail = [](const char* msg) { throw DomainError(std::string("point outside R: ") + msg); };
  if (p.alpha < -tol) fail("alpha < 0");
  if (p.gamma < -tol) fail("gamma < 0");
  if (p.epsilon < -tol) fail("epsilon < 0");
  if (p.alpha > 0.5 + tol) fail("alpha > 1/2");
  if (p.gamma > 0.5 + tol) fail("gamma > 1/2");
  if (p.epsilon > 0.5 + tol) fail("epsilon > 1/2");
  if (p.alpha - p.gamma - p.epsilon < -tol) fail("alpha - gamma - epsilon < 0");
  if (1.0 - 2.0 * p.alpha - 2.0 * p.epsilon < -tol) fail("1 - 2 alpha - 2 epsilon < 0");
}

bool in_region(const OverlapPoint& p) {
  try {
    check_region(p);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

double entropy_h(double x) { return h_fn(x); }

double entropy_h1(double x, double y) {
  if (x < 0 || x > y) throw DomainError("H1 needs 0 <= x <= y");
  return h1_fn(x, y);
}

double phi(double alpha, double lambda, int d) {
  if (!(alpha >= 0.0) || !(alpha < 0.5)) throw DomainError("phi needs alpha in [0, 1/2)");
  if (alpha == 0.0) return 0.0;
  if (!(lambda > 0.0)) throw DomainError("phi needs lambda > 0 when alpha > 0");
  return alpha * std::log(lambda) + h_fn(alpha) +
         d * (xlx(1.0 - alpha) - 0.5 * xlx(1.0 - 2.0 * alpha));
}

long double f_point_ld(long double alpha, long double gamma, long double epsilon, long double log_lambda,
                       int d) {
  return f_impl<long double>(alpha, gamma, epsilon, log_lambda, d);
}

double f_point(const OverlapPoint& p, double lambda, int d) {
  check_region(p);
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  return static_cast<double>(f_point_ld(p.alpha, p.gamma, p.epsilon, std::log(static_cast<long double>(lambda)), d));
}

double df_deps(const OverlapPoint& p, int d) {
  return d * std::log((p.alpha - p.gamma - p.epsilon) * (1.0 - 2.0 * p.alpha - 2.0 * p.epsilon) /
                      (p.epsilon * p.epsilon));
}

double d2f_deps2(const OverlapPoint& p, int d) {
  return -d * (1.0 / (p.alpha - p.gamma - p.epsilon) + 2.0 / (1.0 - 2.0 * p.alpha - 2.0 * p.epsilon) +
               2.0 / p.epsilon);
}

double eps_bar(double alpha, double gamma) {
  if (!(alpha >= 0.0 && alpha < 0.5)) throw DomainError("eps_bar needs alpha in [0, 1/2)");
  if (gamma < 0.0) throw DomainError("eps_bar needs gamma >= 0");
  if (gamma > alpha) throw DomainError("eps_bar needs gamma <= alpha");
  // Rationalized form of (1 - 2 gamma - sqrt((1-2a)^2 + 4(a-g)^2)) / 2.
  const double a = alpha - gamma;
  const double b = 1.0 - 2.0 * alpha;
  return 2.0 * a * b / (b + 2.0 * a + std::hypot(b, 2.0 * a));
}

double g_value(double alpha, double gamma, double lambda, int d) {
  return f_point(OverlapPoint{alpha, gamma, eps_bar(alpha, gamma)}, lambda, d);
}

AlphaStar alpha_star(double lambda, int d) {
  if (!(lambda > 0.0)) throw DomainError("alpha_star needs lambda > 0");
  if (d < 3) throw DomainError("alpha_star needs d >= 3");
  // log of lambda ((1-a)/a) ((1-2a)/(1-a))^d, strictly decreasing on (0, 1/2).
  auto h = [&](double a) {
    return std::log(lambda) + std::log1p(-a) - std::log(a) + d * (std::log1p(-2.0 * a) - std::log1p(-a));
  };
  double lo = 1e-300;
  double hi = 0.5 - 1e-16;
  for (int it = 0; it < 2000 && hi > std::nextafter(lo, 1.0); ++it) {
    const double mid = lo < 1e-12 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (h(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  AlphaStar s;
  s.alpha = std::abs(h(lo)) < std::abs(h(hi)) ? lo : hi;
  s.gamma = s.alpha * s.alpha;
  s.epsilon = s.alpha * (1.0 - 2.0 * s.alpha);
  s.residual = std::abs(std::expm1(h(s.alpha)));
  return s;
}

Matrix3 hessian_f_analytic(double a, int d) {
  const double a2 = a * a;
  const double om = 1.0 - a;
  const double o2 = 1.0 - 2.0 * a;
  Matrix3 h{};
  h[0][0] = (a2 * (6.0 - 21.0 * d) + 2.0 * a2 * a2 * (d - 4.0) - d + 16.0 * a2 * a * d + a * (8.0 * d - 2.0)) /
            (o2 * o2 * om * om * a2);
  h[0][1] = (a * (2.0 - 4.0 * d) + d + a2 * d) / (om * om * a2);
  h[0][2] = (1.0 - 4.0 * a + 2.0 * a2) * d / (o2 * o2 * a2);
  h[1][1] = (-1.0 + (-1.0 + 4.0 * a - 2.0 * a2) * d) / (om * om * a2);
  h[1][2] = -d / a2;
  h[2][2] = -(1.0 - 2.0 * a + 2.0 * a2) * d / (o2 * o2 * a2);
  h[1][0] = h[0][1];
  h[2][0] = h[0][2];
  h[2][1] = h[1][2];
  return h;
}

namespace {

double singular_scale(const OverlapPoint& p) {
  return std::min({p.alpha, p.gamma, p.epsilon, p.alpha - p.gamma, p.alpha - p.gamma - p.epsilon,
                   1.0 - 2.0 * p.alpha - 2.0 * p.epsilon});
}

}  // namespace

Matrix3 hessian_f_fd(const OverlapPoint& p, double lambda, int d, double rel_step) {
  check_region(p);
  const double scale = singular_scale(p);
  if (!(scale > 0.0)) throw DomainError("finite differences refused at a singular boundary point of R");
  const Wide ll = log(Wide(lambda));
  const Wide x0[3] = {Wide(p.alpha), Wide(p.gamma), Wide(p.epsilon)};
  auto f_at = [&](const Wide& da, const Wide& dg, const Wide& de) {
    return f_impl<Wide>(x0[0] + da, x0[1] + dg, x0[2] + de, ll, d);
  };
  auto second = [&](int i, int j, const Wide& h) -> Wide {
    Wide e1[3] = {0, 0, 0};
    Wide e2[3] = {0, 0, 0};
    e1[i] = h;
    e2[j] = h;
    if (i == j) {
      return (f_at(e1[0], e1[1], e1[2]) - 2 * f_at(0, 0, 0) + f_at(-e1[0], -e1[1], -e1[2])) / (h * h);
    }
    const Wide pp = f_at(e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]);
    const Wide pm = f_at(e1[0] - e2[0], e1[1] - e2[1], e1[2] - e2[2]);
    const Wide mp = f_at(-e1[0] + e2[0], -e1[1] + e2[1], -e1[2] + e2[2]);
    const Wide mm = f_at(-e1[0] - e2[0], -e1[1] - e2[1], -e1[2] - e2[2]);
    return (pp - pm - mp + mm) / (4 * h * h);
  };
  const Wide h = Wide(rel_step) * scale;
  Matrix3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const Wide coarse = second(i, j, h);
      const Wide fine = second(i, j, h / 2);
      out[i][j] = static_cast<double>((4 * fine - coarse) / 3);
      out[j][i] = out[i][j];
    }
  }
  return out;
}

double df_deps_fd(const OverlapPoint& p, double lambda, int d, double rel_step) {
  check_region(p);
  const double scale = singular_scale(p);
  if (!(scale > 0.0)) throw DomainError("finite differences refused at a singular boundary point of R");
  const Wide ll = log(Wide(lambda));
  const Wide a(p.alpha), g(p.gamma), e(p.epsilon);
  auto central = [&](const Wide& h) {
    return (f_impl<Wide>(a, g, e + h, ll, d) - f_impl<Wide>(a, g, e - h, ll, d)) / (2 * h);
  };
  const Wide h = Wide(rel_step) * scale;
  return static_cast<double>((4 * central(h / 2) - central(h)) / 3);
}

std::array<double, 3> symmetric_eigenvalues(const Matrix3& m) {
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = m[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(1), ev(2)};
}

MaxReport verify_global_max(double lambda, int d, double resolution) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  const double inv = 1.0 / resolution;
  const long n_steps = std::lround(inv);
  if (n_steps < 4 || std::abs(inv - static_cast<double>(n_steps)) > 1e-6)
    throw ArgumentError("grid resolution must be 1/N for an integer N >= 4");
  const double h = 1.0 / static_cast<double>(n_steps);

  // Every argument of x ln x on the grid is an integer multiple of h.
  std::vector<double> xl(static_cast<std::size_t>(n_steps) + 1);
  for (long i = 0; i <= n_steps; ++i) xl[static_cast<std::size_t>(i)] = xlx(static_cast<double>(i) * h);
  auto X = [&](long i) { return xl[static_cast<std::size_t>(i)]; };
  const long N = n_steps;
  auto I1 = [&](long c, long t) { return X(c) - X(c - t) - static_cast<double>(t) * h; };
  auto I2 = [&](long c, long t) { return 0.5 * (X(c) - X(c - 2 * t)) - static_cast<double>(t) * h; };
  auto H1 = [&](long x, long y) { return X(y) - X(x) - X(y - x); };
  const double ll = std::log(lambda);
  auto f_grid = [&](long a, long g, long e) {
    const double psi2 = H1(e, a - g) + I1(N - 2 * a + g, g) - I2(N, g) + I1(N - 2 * a, e) +
                        I1(a - g, a - g - e) - I2(N - 2 * g, a - g) + I1(N - 2 * a - e, e) - I2(N - 2 * a, e);
    return 2.0 * static_cast<double>(a) * h * ll - X(a) - X(N - a) + H1(g, a) + H1(a - g, N - a) + d * psi2;
  };

  MaxReport rep;
  rep.d = d;
  rep.lambda = lambda;
  rep.resolution = h;
  rep.star = alpha_star(lambda, d);
  const OverlapPoint star{rep.star.alpha, rep.star.gamma, rep.star.epsilon};
  rep.f_star = f_point(star, lambda, d);

  double best = -std::numeric_limits<double>::infinity();
  long ba = 0, bg = 0, be = 0;
  std::size_t count = 0;
  for (long a = 0; 2 * a <= N; ++a) {
    for (long g = 0; g <= a; ++g) {
      const long e_max = std::min(a - g, (N - 2 * a) / 2);
      for (long e = 0; e <= e_max; ++e) {
        const double v = f_grid(a, g, e);
        ++count;
        if (v > best) {
          best = v;
          ba = a;
          bg = g;
          be = e;
        }
      }
    }
  }
  rep.grid_points = count;
  rep.grid_max = best;
  rep.grid_argmax = OverlapPoint{ba * h, bg * h, be * h};
  const double slack = h * (1.0 + 1e-9);
  rep.argmax_within_cell = std::abs(rep.grid_argmax.alpha - star.alpha) <= slack &&
                           std::abs(rep.grid_argmax.gamma - star.gamma) <= slack &&
                           std::abs(rep.grid_argmax.epsilon - star.epsilon) <= slack;

  rep.hessian = hessian_f_analytic(star.alpha, d);
  rep.hessian_fd = hessian_f_fd(star, lambda, d);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      worst = std::max(worst, std::abs(rep.hessian[i][j] - rep.hessian_fd[i][j]) / std::abs(rep.hessian[i][j]));
  rep.hessian_max_rel_diff = worst;
  rep.eigenvalues = symmetric_eigenvalues(rep.hessian);
  rep.negative_definite = rep.eigenvalues[0] < 0 && rep.eigenvalues[1] < 0 && rep.eigenvalues[2] < 0;

  // Quadratic decay constant from grid points within three cells of the maximizer.
  double sxy = 0.0, sxx = 0.0, cmin = std::numeric_limits<double>::infinity();
  const long r = 3;
  for (long a = std::max(0L, ba - r); a <= ba + r && 2 * a <= N; ++a) {
    for (long g = std::max(0L, bg - r); g <= std::min(a, bg + r); ++g) {
      const long e_max = std::min(a - g, (N - 2 * a) / 2);
      for (long e = std::max(0L, be - r); e <= std::min(e_max, be + r); ++e) {
        const double da = a * h - star.alpha, dg = g * h - star.gamma, de = e * h - star.epsilon;
        const double dist2 = da * da + dg * dg + de * de;
        if (dist2 < 1e-24) continue;
        const double gap = rep.f_star - f_grid(a, g, e);
        sxy += gap * dist2;
        sxx += dist2 * dist2;
        cmin = std::min(cmin, gap / dist2);
      }
    }
  }
  rep.decay_c_fit = sxx > 0 ? sxy / sxx : 0.0;
  rep.decay_c_min = std::isfinite(cmin) ? cmin : 0.0;
  return rep;
}

double first_moment_log(int n, int s, double lambda, int d) {
  check_nd(n, d);
  if (s < 0 || 2 * s >= n) throw DomainError("first moment needs 0 <= alpha < 1/2");
  LogAcc acc(lambda);
  first_moment_terms(acc, n, s, d);
  return acc.value();
}

Rational first_moment_rational(int n, int s, const Rational& lambda, int d) {
  check_nd(n, d);
  if (s < 0 || 2 * s >= n) throw DomainError("first moment needs 0 <= alpha < 1/2");
  RatAcc acc(lambda);
  first_moment_terms(acc, n, s, d);
  return acc.value();
}

double first_moment_exact(int n, double alpha, double lambda, int d) {
  if (!(alpha < 0.5)) throw DomainError("alpha must be < 1/2");
  return std::exp(first_moment_log(n, to_count(alpha * n, "alpha n"), lambda, d));
}

double second_moment_log(int n, int s, int t, int k, double lambda, int d) {
  check_nd(n, d);
  check_overlap_counts(n, s, t, k, d);
  LogAcc acc(lambda);
  second_moment_terms(acc, n, s, t, k, d);
  return acc.value();
}

Rational second_moment_rational(int n, int s, int t, int k, const Rational& lambda, int d) {
  check_nd(n, d);
  check_overlap_counts(n, s, t, k, d);
  RatAcc acc(lambda);
  second_moment_terms(acc, n, s, t, k, d);
  return acc.value();
}

double second_moment_exact(int n, const OverlapPoint& p, double lambda, int d) {
  check_region(p);
  const int s = to_count(p.alpha * n, "alpha n");
  const int t = to_count(p.gamma * n, "gamma n");
  const int k = to_count(p.epsilon * d * n, "epsilon d n");
  return std::exp(second_moment_log(n, s, t, k, lambda, d));
}

std::vector<IntegerOverlap> feasible_overlaps(int n, int s, int d) {
  std::vector<IntegerOverlap> out;
  if (s < 0 || 2 * s > n) return out;
  for (int t = 0; t <= s; ++t) {
    const std::int64_t kmax =
        std::min<std::int64_t>(static_cast<std::int64_t>(s - t) * d, (static_cast<std::int64_t>(n) * d - 2LL * s * d) / 2);
    for (std::int64_t k = 0; k <= kmax; ++k) out.push_back({t, static_cast<int>(k)});
  }
  return out;
}

Rational second_moment_sum_rational(int n, int s, const Rational& lambda, int d) {
  Rational total = 0;
  for (const auto& o : feasible_overlaps(n, s, d)) total += second_moment_rational(n, s, o.t, o.k, lambda, d);
  return total;
}

double second_moment_sum_log(int n, int s, double lambda, int d) {
  std::vector<double> logs;
  for (const auto& o : feasible_overlaps(n, s, d)) {
    const double v = second_moment_log(n, s, o.t, o.k, lambda, d);
    if (std::isfinite(v)) logs.push_back(v);
  }
  if (logs.empty()) return -INFINITY;
  const double mx = *std::max_element(logs.begin(), logs.end());
  double acc = 0.0;
  for (double v : logs) acc += std::exp(v - mx);
  return mx + std::log(acc);
}

void check_census(const PuncturedCensus& c, int d) {
  if (d < 2) throw DomainError("d must be >= 2");
  if (c.m < 0 || c.M1 < 0 || c.M2 < 0 || c.L1 < 0 || c.L2 < 0) throw ArgumentError("census counts must be nonnegative");
  if (c.L1 > c.M1 || c.L2 > c.M2) throw ArgumentError("census has L_i > M_i");
  if (census_half_edges(c, d) % 2 != 0) throw ArgumentError("census half-edge total N_T is odd");
}

double punctured_first_moment_log(const PuncturedCensus& c, int s, double lambda, int d) {
  check_census(c, d);
  if (s < 0 || s > c.m) throw DomainError("occupied interior count outside [0, m]");
  LogAcc acc(lambda);
  punctured_first_terms(acc, c, s, d);
  return acc.value();
}

Rational punctured_first_moment_rational(const PuncturedCensus& c, int s, const Rational& lambda, int d) {
  check_census(c, d);
  if (s < 0 || s > c.m) throw DomainError("occupied interior count outside [0, m]");
  RatAcc acc(lambda);
  punctured_first_terms(acc, c, s, d);
  return acc.value();
}

double punctured_first_moment(const PuncturedCensus& c, double alpha, double lambda, int d) {
  return std::exp(punctured_first_moment_log(c, to_count(alpha * static_cast<double>(c.m), "alpha m"), lambda, d));
}

double punctured_second_moment_log(const PuncturedCensus& c, int s, int t, int k, double lambda, int d) {
  check_census(c, d);
  if (s < 0 || s > c.m) throw DomainError("occupied interior count outside [0, m]");
  LogAcc acc(lambda);
  punctured_second_terms(acc, c, s, t, k, d);
  return acc.value();
}

Rational punctured_second_moment_rational(const PuncturedCensus& c, int s, int t, int k, const Rational& lambda,
                                          int d) {
  check_census(c, d);
  if (s < 0 || s > c.m) throw DomainError("occupied interior count outside [0, m]");
  RatAcc acc(lambda);
  punctured_second_terms(acc, c, s, t, k, d);
  return acc.value();
}

double chi(int occupied, double lambda, int d) {
  if (occupied < 0) throw ArgumentError("occupied count must be nonnegative");
  if (occupied == 0) return 1.0;
  const double a = alpha_star(lambda, d).alpha;
  const double base = lambda * std::pow((1.0 - 2.0 * a) / (1.0 - a), d - 1);
  return std::pow(base, occupied);
}

}  // namespace hardcore
