#include "sphcov/oracle.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "sphcov/errors.hpp"
#include "sphcov/quadrature.hpp"
#include "sphcov/specfun.hpp"

namespace sphcov::oracle {
namespace {

using specfun::ln_gamma;

double ln_binomial(long long n, long long k) {
  return ln_gamma(static_cast<double>(n) + 1.0) - ln_gamma(static_cast<double>(k) + 1.0) -
         ln_gamma(static_cast<double>(n - k) + 1.0);
}

void check_args(Dimension d, double p, long long n, const char* fn) {
  if (!(p >= 0.0)) throw DomainError(std::string(fn) + ": requires p >= 0");
  if (n < d.value() + 2) throw DomainError(std::string(fn) + ": requires n >= d+2");
}

// Integrates weight(rho) * (facet density in rho) over [0, sqrt 2], where
// ln_weight returns the log of the weight.
quad::Result integrate_facet_density(Dimension d, long long n,
                                     const std::function<double(double)>& ln_weight,
                                     const QuadratureOptions& opts) {
  const int dd = d.value();
  const double d2 = static_cast<double>(dd) * dd;
  const double ln_front = std::log(2.0) + ln_binomial(n, dd + 1) - specfun::ln_beta(d2 / 2.0, 0.5);
  const double tail_exp = static_cast<double>(n - dd - 1);

  auto integrand = [&](double rho) -> double {
    if (rho <= 0.0) return 0.0;
    const double lambda = constants::cap_area_euclid(d, rho);
    const double ln_val = ln_front + ln_weight(rho) + (d2 - 1.0) * std::log(rho) +
                          tail_exp * std::log1p(-lambda) +
                          (d2 / 2.0 - 1.0) * std::log1p(-rho * rho / 4.0);
    return std::exp(ln_val);
  };

  // The mass sits at rho ~ n^{-1/d}; break the interval on that scale.
  const double scale = std::pow(static_cast<double>(n), -1.0 / dd) *
                       std::pow(constants::kappa(d), -1.0 / dd);
  // The integrand decays like exp(-m^d) at m scale lengths; place breaks
  // geometrically until that factor underflows, otherwise a wide last panel
  // can sample only zeros and miss the tail.
  std::vector<double> breaks;
  for (double m = 0.25; std::pow(m, dd) < 800.0; m *= 1.5) breaks.push_back(m * scale);
  quad::Options q;
  q.abs_tol = 0.0;
  q.rel_tol = opts.rel_tol;
  q.max_subdivisions = opts.max_subdivisions;
  return quad::integrate(integrand, 0.0, std::sqrt(2.0), q, breaks);
}

}  // namespace

}  // namespace sphcov::oracle

namespace sphcov {

std::string to_string(PredictionMethod m) {
  switch (m) {
    case PredictionMethod::kQuadrature: return "quadrature";
    case PredictionMethod::kAsymptotic: return "asymptotic";
    case PredictionMethod::kExactD2: return "exact-d2";
  }
  return "unknown";
}

}  // namespace sphcov

namespace sphcov::oracle {

MomentPrediction moment_quadrature(Dimension d, double p, long long n,
                                   const QuadratureOptions& opts) {
  check_args(d, p, n, "moment_quadrature");
  auto ln_weight = [p](double rho) { return p == 0.0 ? 0.0 : p * std::log(rho); };
  const quad::Result r = integrate_facet_density(d, n, ln_weight, opts);
  MomentPrediction m;
  m.d = d.value();
  m.p = p;
  m.n = n;
  m.value = r.value;
  m.method = PredictionMethod::kQuadrature;
  m.quadrature_error = r.error;
  return m;
}

MomentPrediction moment_asymptotic(Dimension d, double p, long long n) {
  check_args(d, p, n, "moment_asymptotic");
  const double dd = d.value();
  const double nn = static_cast<double>(n);
  const double ln_ratio = ln_gamma(dd + p / dd) + ln_gamma(nn + 1.0) - ln_gamma(dd) -
                          ln_gamma(nn + p / dd) - (p / dd) * std::log(constants::kappa(d));
  MomentPrediction m;
  m.d = d.value();
  m.p = p;
  m.n = n;
  m.value = constants::big_b(d) * std::exp(ln_ratio);
  m.method = PredictionMethod::kAsymptotic;
  return m;
}

MomentPrediction moment_exact_d2(double p, long long n) {
  MomentPrediction m;
  m.d = 2;
  m.p = p;
  m.n = n;
  m.value = constants::d2_moment_refined(p, n);
  m.method = PredictionMethod::kExactD2;
  return m;
}

double mean_cap_area_sum(Dimension d, long long n, const QuadratureOptions& opts) {
  check_args(d, 0.0, n, "mean_cap_area_sum");
  auto ln_weight = [d](double rho) { return std::log(constants::cap_area_euclid(d, rho)); };
  return integrate_facet_density(d, n, ln_weight, opts).value;
}

}  // namespace sphcov::oracle
