#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hardcore {

using Rational = boost::multiprecision::cpp_rational;

struct OverlapPoint {
  double alpha = 0.0;
  double gamma = 0.0;
  double epsilon = 0.0;
};

// Throws DomainError naming the violated constraint of the feasible region.
void check_region(const OverlapPoint& p);
bool in_region(const OverlapPoint& p);

double entropy_h(double x);
double entropy_h1(double x, double y);

double phi(double alpha, double lambda, int d);

double f_point(const OverlapPoint& p, double lambda, int d);
long double f_point_ld(long double alpha, long double gamma, long double epsilon, long double log_lambda,
                       int d);

// Closed forms of the first two epsilon-derivatives.
double df_deps(const OverlapPoint& p, int d);
double d2f_deps2(const OverlapPoint& p, int d);

double eps_bar(double alpha, double gamma);
double g_value(double alpha, double gamma, double lambda, int d);

struct AlphaStar {
  double alpha = 0.0;
  double gamma = 0.0;
  double epsilon = 0.0;
  double residual = 0.0;
};
AlphaStar alpha_star(double lambda, int d);

using Matrix3 = std::array<std::array<double, 3>, 3>;

// Closed-form second partials at (alpha, alpha^2, alpha(1-2alpha)).
Matrix3 hessian_f_analytic(double alpha, int d);
// Central differences with Richardson extrapolation; steps scale with the distance to the
// nearest singular face of R. Throws DomainError on boundary points.
Matrix3 hessian_f_fd(const OverlapPoint& p, double lambda, int d, double rel_step = 1e-3);
double df_deps_fd(const OverlapPoint& p, double lambda, int d, double rel_step = 1e-3);
std::array<double, 3> symmetric_eigenvalues(const Matrix3& m);

struct MaxReport {
  int d = 0;
  double lambda = 0.0;
  double resolution = 0.0;
  AlphaStar star;
  OverlapPoint grid_argmax;
  double grid_max = 0.0;
  double f_star = 0.0;
  bool argmax_within_cell = false;
  Matrix3 hessian{};
  Matrix3 hessian_fd{};
  double hessian_max_rel_diff = 0.0;
  std::array<double, 3> eigenvalues{};
  bool negative_definite = false;
  double decay_c_fit = 0.0;  // least squares of f* - f = C |x - x*|^2 on near-max grid points
  double decay_c_min = 0.0;  // smallest observed ratio on the same samples
  std::size_t grid_points = 0;
};
MaxReport verify_global_max(double lambda, int d, double resolution = 1e-3);

// Exact finite-n moments. Counts are integers: s = alpha n, t = gamma n, k = epsilon d n.
double first_moment_log(int n, int s, double lambda, int d);
Rational first_moment_rational(int n, int s, const Rational& lambda, int d);
double first_moment_exact(int n, double alpha, double lambda, int d);

double second_moment_log(int n, int s, int t, int k, double lambda, int d);
Rational second_moment_rational(int n, int s, int t, int k, const Rational& lambda, int d);
double second_moment_exact(int n, const OverlapPoint& p, double lambda, int d);

struct IntegerOverlap {
  int t = 0;
  int k = 0;
};
// All (t, k) with (s/n, t/n, k/(dn)) in R.
std::vector<IntegerOverlap> feasible_overlaps(int n, int s, int d);
Rational second_moment_sum_rational(int n, int s, const Rational& lambda, int d);
double second_moment_sum_log(int n, int s, double lambda, int d);

struct PuncturedCensus {
  std::int64_t m = 0;
  std::int64_t M1 = 0;
  std::int64_t M2 = 0;
  std::int64_t L1 = 0;
  std::int64_t L2 = 0;
  std::int64_t K1() const { return M1 - L1; }
  std::int64_t K2() const { return M2 - L2; }
};

void check_census(const PuncturedCensus& c, int d);
// s = alpha m occupied interior vertices.
double punctured_first_moment_log(const PuncturedCensus& c, int s, double lambda, int d);
Rational punctured_first_moment_rational(const PuncturedCensus& c, int s, const Rational& lambda, int d);
double punctured_first_moment(const PuncturedCensus& c, double alpha, double lambda, int d);
double punctured_second_moment_log(const PuncturedCensus& c, int s, int t, int k, double lambda, int d);
Rational punctured_second_moment_rational(const PuncturedCensus& c, int s, int t, int k,
                                          const Rational& lambda, int d);
double chi(int occupied, double lambda, int d);

}  // namespace hardcore
