#include "sphcov/constants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphcov/errors.hpp"
#include "sphcov/specfun.hpp"

namespace sphcov {

using specfun::kPi;
using specfun::ln_gamma;

Dimension::Dimension(int d) : d_(d) {
  if (d < 1 || d > kMaxDimension) {
    throw DomainError("unsupported dimension d=" + std::to_string(d) +
                      " (supported 1.." + std::to_string(kMaxDimension) + ")");
  }
}

double kappa_unchecked(int d) {
  if (d < 1) throw DomainError("kappa: requires d >= 1");
  const double dd = d;
  return std::exp(ln_gamma(0.5 * (dd + 1.0)) - ln_gamma(0.5 * dd)) /
         (dd * std::sqrt(kPi));
}

namespace constants {
namespace {

void require_nonneg(double v, const char* fn, const char* what) {
  if (!(v >= 0.0)) throw DomainError(std::string(fn) + ": requires " + what + " >= 0");
}

}  // namespace

double kappa(Dimension d) { return kappa_unchecked(d.value()); }

double big_b(Dimension d) {
  const int n = d.value();
  const double ln_b = std::log(2.0 / (n + 1.0)) + std::log(kappa_unchecked(n * n)) -
                      n * std::log(kappa(d));
  return std::exp(ln_b);
}

double e_moment(Dimension d, double p) {
  require_nonneg(p, "e_moment", "p");
  const double dd = d.value();
  return std::exp(ln_gamma(dd + p / dd) - ln_gamma(dd) - (p / dd) * std::log(kappa(d)));
}

double c_moment(Dimension d, double p) { return big_b(d) * e_moment(d, p); }

double hole_pdf(Dimension d, double x) {
  require_nonneg(x, "hole_pdf", "x");
  const double dd = d.value();
  const double k = kappa(d);
  if (x == 0.0) return d.value() == 1 ? k : 0.0;
  if (std::isinf(x)) return 0.0;
  const double ln_f = std::log(dd) - ln_gamma(dd) + dd * std::log(k) +
                      (dd * dd - 1.0) * std::log(x) - k * std::pow(x, dd);
  return std::exp(ln_f);
}

double hole_cdf(Dimension d, double x) {
  require_nonneg(x, "hole_cdf", "x");
  return specfun::reg_inc_gamma_p(d.value(), kappa(d) * std::pow(x, d.value()));
}

double sep_limit_cdf(Dimension d, double t) {
  if (t < 0.0) return 0.0;
  return -std::expm1(-kappa(d) * std::pow(t, d.value()) / 2.0);
}

double sep_c(Dimension d) {
  const double dd = d.value();
  return std::pow(kappa(d) / 2.0, -1.0 / dd) * std::exp(ln_gamma(1.0 + 1.0 / dd));
}

double sep_var_limit(Dimension d) {
  const double dd = d.value();
  const double g1 = std::exp(ln_gamma(1.0 + 1.0 / dd));
  const double g2 = std::exp(ln_gamma(1.0 + 2.0 / dd));
  return std::pow(kappa(d) / 2.0, -2.0 / dd) * (g2 - g1 * g1);
}

double sep_prob_bound(Dimension d) {
  const double dd = d.value();
  return -std::expm1(dd * ln_gamma(1.0 + 1.0 / dd));
}

double sep_lower_factor(Dimension d) {
  const double dd = d.value();
  return std::pow(dd + 1.0, -1.0 / dd) / std::exp(ln_gamma(2.0 + 1.0 / dd));
}

double covering_coeff(Dimension d) { return std::pow(kappa(d), -1.0 / d.value()); }

double cap_area_euclid(Dimension d, double rho) {
  if (!(rho >= 0.0 && rho <= 2.0)) throw DomainError("cap_area_euclid: requires 0 <= rho <= 2");
  const double half = 0.5 * d.value();
  return specfun::reg_inc_beta(rho * rho / 4.0, half, half);
}

double cap_area_euclid_hypergeometric(Dimension d, double rho) {
  if (!(rho >= 0.0 && rho <= std::sqrt(2.0) * (1.0 + 1e-15))) {
    throw DomainError("cap_area_euclid_hypergeometric: requires 0 <= rho <= sqrt(2)");
  }
  const double half = 0.5 * d.value();
  const double z = std::min(rho * rho / 4.0, 0.5);
  return kappa(d) * std::pow(rho, d.value()) *
         specfun::gauss_2f1(1.0 - half, half, 1.0 + half, z);
}

double cap_area_geodesic(Dimension d, double eps) {
  if (!(eps >= 0.0 && eps <= kPi)) throw DomainError("cap_area_geodesic: requires 0 <= eps <= pi");
  return cap_area_euclid(d, std::min(2.0, 2.0 * std::sin(eps / 2.0)));
}

double angle_pdf(Dimension d, double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("angle_pdf: requires 0 <= theta <= pi");
  // omega_{d-1} / omega_d = d kappa_d
  return d.value() * kappa(d) * std::pow(std::sin(theta), d.value() - 1);
}

double circle_gap_mean(long long n, long long k) {
  if (n < 2) throw DomainError("circle_gap_mean: requires n >= 2");
  if (k < 1 || k > n) throw DomainError("circle_gap_mean: requires 1 <= k <= n");
  return 2.0 * kPi / static_cast<double>(n) * specfun::harmonic(n, k);
}

double circle_cov_mean(long long n) {
  if (n < 2) throw DomainError("circle_cov_mean: requires n >= 2");
  return kPi / static_cast<double>(n) * specfun::harmonic(n, 1);
}

double d2_moment_refined(double p, long long n) {
  require_nonneg(p, "d2_moment_refined", "p");
  if (n < 4) throw DomainError("d2_moment_refined: requires n >= 4");
  const double nn = static_cast<double>(n);
  const double ln_ratio = ln_gamma(2.0 + p / 2.0) + ln_gamma(nn + 1.0) -
                          ln_gamma(nn + 1.0 + p / 2.0) + p * std::log(2.0);
  return (2.0 * nn - 4.0) * std::exp(ln_ratio);
}

double d2_first_correction(double p) { return (1.0 + p / 2.0) / 2.0; }

ConstantsTable table(Dimension d) {
  return ConstantsTable{
      .d = d.value(),
      .kappa = kappa(d),
      .big_b = big_b(d),
      .sep_c = sep_c(d),
      .covering_coeff = covering_coeff(d),
      .sep_var_limit = sep_var_limit(d),
      .sep_lower_factor = sep_lower_factor(d),
      .sep_prob_bound = sep_prob_bound(d),
  };
}

}  // namespace constants
}  // namespace sphcov
