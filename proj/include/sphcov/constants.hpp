#pragma once

#include <string>

namespace sphcov {

inline constexpr int kMaxDimension = 8;

/// Sphere dimension d of S^d in R^{d+1}; supported range 1..8.
class Dimension {
 public:
  explicit Dimension(int d);
  int value() const noexcept { return d_; }
  int ambient() const noexcept { return d_ + 1; }
  friend bool operator==(Dimension, Dimension) = default;

 private:
  int d_;
};

/// kappa_d for any d >= 1; B_d needs kappa at d^2, beyond the Dimension range.
double kappa_unchecked(int d);

/// Closed-form constants of one sphere dimension.
struct ConstantsTable {
  int d = 0;
  double kappa = 0.0;
  double big_b = 0.0;
  double sep_c = 0.0;
  double covering_coeff = 0.0;
  double sep_var_limit = 0.0;
  double sep_lower_factor = 0.0;
  double sep_prob_bound = 0.0;
};

namespace constants {

// Small-cap area coefficient: sigma_d(C_rho) ~ kappa_d rho^d.
double kappa(Dimension d);
// Facets per point: E[f_d] ~ B_d N.
double big_b(Dimension d);
double e_moment(Dimension d, double p);
double c_moment(Dimension d, double p);

/// Limiting density of the scaled hole radii N^{1/d} rho_k.
double hole_pdf(Dimension d, double x);
double hole_cdf(Dimension d, double x);

/// Extreme law of the scaled separation N^{2/d} theta_min.
double sep_limit_cdf(Dimension d, double t);
double sep_c(Dimension d);
double sep_var_limit(Dimension d);
double sep_prob_bound(Dimension d);
double sep_lower_factor(Dimension d);

double covering_coeff(Dimension d);

/// Normalized area of a cap with Euclidean radius rho in [0, 2].
double cap_area_euclid(Dimension d, double rho);
/// Same quantity through kappa_d rho^d 2F1(1-d/2, d/2; 1+d/2; rho^2/4);
/// rho in [0, sqrt(2)].
double cap_area_euclid_hypergeometric(Dimension d, double rho);
/// Normalized area of a cap with geodesic radius eps in [0, pi].
double cap_area_geodesic(Dimension d, double eps);

/// Density of the angle between two independent uniform points.
double angle_pdf(Dimension d, double theta);

// Circle (d = 1) order statistics.
double circle_gap_mean(long long n, long long k);
double circle_cov_mean(long long n);

/// Exact Gamma-ratio form of E[sum rho_k^p] on S^2.
double d2_moment_refined(double p, long long n);
/// First-order correction coefficient B_1^{(1-p/2)}(1) = (1 + p/2) / 2.
double d2_first_correction(double p);

ConstantsTable table(Dimension d);

}  // namespace constants
}  // namespace sphcov
