#pragma once

#include <string>

#include "sphcov/constants.hpp"

namespace sphcov {

enum class PredictionMethod { kQuadrature, kAsymptotic, kExactD2 };

std::string to_string(PredictionMethod m);

/// Predicted E[sum_k rho_k^p] for N uniform points on S^d.
struct MomentPrediction {
  int d = 0;
  double p = 0.0;
  long long n = 0;
  double value = 0.0;
  PredictionMethod method = PredictionMethod::kQuadrature;
  double quadrature_error = 0.0;  // estimated absolute error, quadrature only
};

namespace oracle {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
};

/// Finite-N integral over the Euclidean cap radius rho in [0, sqrt(2)]:
///   2 C(n, d+1) / B(d^2/2, 1/2) * int rho^{p+d^2-1} (1 - lambda)^{n-d-1}
///                                     (1 - rho^2/4)^{d^2/2-1} d rho,
/// lambda = sigma_d(C_rho). The lambda^{n-d-1} branch is dropped; it is
/// bounded by 2^{-(n-d-1)}. Integrand is evaluated in log space.
MomentPrediction moment_quadrature(Dimension d, double p, long long n,
                                   const QuadratureOptions& opts = {});

/// Gamma-ratio leading term B_d kappa_d^{-p/d} Gamma(d+p/d) Gamma(n+1) /
/// (Gamma(d) Gamma(n+p/d)).
MomentPrediction moment_asymptotic(Dimension d, double p, long long n);

/// d = 2 exact Gamma-ratio form.
MomentPrediction moment_exact_d2(double p, long long n);

/// E[sum_k sigma_d(C_{rho_k})] by the same quadrature with rho^p replaced
/// by the cap area.
double mean_cap_area_sum(Dimension d, long long n, const QuadratureOptions& opts = {});

}  // namespace oracle
}  // namespace sphcov
