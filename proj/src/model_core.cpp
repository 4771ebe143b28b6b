#include "hardcore/model_core.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hardcore/errors.hpp"

namespace hardcore {

namespace {

void check_d(int d) {
  if (d < 2) throw DomainError("d must be >= 2, got " + std::to_string(d));
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
  if (!(alpha < 0.5)) throw DomainError("alpha must be < 1/2");
}

}  // namespace

double log_lambda_of_alpha(int d, double alpha) {
  check_d(d);
  check_alpha(alpha);
  if (alpha == 0.0) return -INFINITY;
  return std::log(alpha) - std::log1p(-2.0 * alpha) +
         (d - 1) * (std::log1p(-alpha) - std::log1p(-2.0 * alpha));
}

double lambda_of_alpha(int d, double alpha) {
  if (alpha == 0.0) {
    check_d(d);
    return 0.0;
  }
  return std::exp(log_lambda_of_alpha(d, alpha));
}

HardcoreParams params_from_alpha(int d, double alpha) {
  return HardcoreParams{d, lambda_of_alpha(d, alpha), alpha};
}

HardcoreParams params_from_lambda(int d, double lambda) {
  check_d(d);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive and finite");
  const double target = std::log(lambda);
  double lo = 1e-16;
  double hi = 0.5 - 1e-16;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (log_lambda_of_alpha(d, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return HardcoreParams{d, lambda, 0.5 * (lo + hi)};
}

MarkovKernel markov_kernel(const HardcoreParams& p) {
  check_alpha(p.alpha);
  MarkovKernel k;
  k.p11 = 0.0;
  k.p10 = 1.0;
  k.p01 = p.alpha / (1.0 - p.alpha);
  k.p00 = (1.0 - 2.0 * p.alpha) / (1.0 - p.alpha);
  return k;
}

DerivedConstants derived_constants(const HardcoreParams& p) {
  check_alpha(p.alpha);
  DerivedConstants c;
  c.theta = -p.alpha / (1.0 - p.alpha);
  if (p.alpha > 0.0) {
    c.pi01 = (1.0 - p.alpha) / p.alpha;
    c.delta = c.pi01 - 1.0;
  } else {
    c.pi01 = INFINITY;
    c.delta = INFINITY;
  }
  return c;
}

ThresholdReport threshold_table(int d, std::optional<double> alpha, double c_constant) {
  if (d < 3) throw DomainError("threshold_table needs d >= 3");
  const double ld = std::log(static_cast<double>(d));
  const double lld = std::log(ld);
  const double llld = std::log(lld);
  const double ln2 = std::numbers::ln2;

  ThresholdReport r;
  r.d = d;
  r.small_d = lld < 1.0;
  r.lambda_r_lower = ln2 * ld * ld / (2.0 * lld);
  r.lambda_r_upper = std::numbers::e * ld * ld;
  r.alpha_r_lower = (ld + lld - llld - ln2 + std::log(ln2)) / d;
  r.alpha_r_upper = (ld + lld + 1.0) / d;
  r.c_constant = c_constant;
  r.delta_d = c_constant * (lld + 1.0) / ld;
  r.alpha_c = (2.0 - r.delta_d) * ld / d;
  if (r.alpha_c > 0.0 && r.alpha_c < 0.5) r.lambda_c = lambda_of_alpha(d, r.alpha_c);
  r.martin_bound = std::numbers::e - 1.0;
  if (alpha) {
    check_alpha(*alpha);
    r.alpha = alpha;
    const double theta = -*alpha / (1.0 - *alpha);
    r.kesten_stigum = theta * theta * (d - 1);
  }
  return r;
}

}  // namespace hardcore
