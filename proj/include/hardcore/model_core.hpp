#pragma once

#include <optional>

namespace hardcore {

struct HardcoreParams {
  int d = 3;
  double lambda = 0.0;
  double alpha = 0.0;
};

struct MarkovKernel {
  double p11 = 0.0;
  double p10 = 1.0;
  double p01 = 0.0;
  double p00 = 1.0;

  // Eigenvalue other than 1 of [[p00, p01], [p10, p11]].
  double second_eigenvalue() const { return p00 + p11 - 1.0; }
};

struct DerivedConstants {
  double theta = 0.0;
  double pi01 = 0.0;
  double delta = 0.0;
};

// lambda(alpha) on the d-regular density relation; 0 at alpha = 0.
double lambda_of_alpha(int d, double alpha);
double log_lambda_of_alpha(int d, double alpha);

HardcoreParams params_from_alpha(int d, double alpha);
HardcoreParams params_from_lambda(int d, double lambda);

MarkovKernel markov_kernel(const HardcoreParams& p);
DerivedConstants derived_constants(const HardcoreParams& p);

struct ThresholdReport {
  int d = 0;
  double lambda_r_lower = 0.0;
  double lambda_r_upper = 0.0;
  double alpha_r_lower = 0.0;
  double alpha_r_upper = 0.0;
  double c_constant = 3.01;
  double delta_d = 0.0;
  double alpha_c = 0.0;
  std::optional<double> lambda_c;  // absent when alpha_c falls outside (0, 1/2)
  double martin_bound = 0.0;
  std::optional<double> alpha;
  std::optional<double> kesten_stigum;  // theta^2 (d-1) at the supplied alpha
  bool small_d = false;                 // lnln d < 1: formulas far outside their regime
  bool asymptotic_guide = true;
};

ThresholdReport threshold_table(int d, std::optional<double> alpha = std::nullopt,
                                double c_constant = 3.01);

}  // namespace hardcore
