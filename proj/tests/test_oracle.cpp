#include <cmath>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "quad_oracle.hpp"
#include "sphcov/constants.hpp"
#include "sphcov/errors.hpp"
#include "sphcov/oracle.hpp"

using namespace sphcov;

namespace {

// The finite-N moment integral rebuilt from Boost special functions and
// Boost quadrature.
double boost_moment(int d, double p, long long n) {
  const double d2 = double(d) * d;
  const double ln_front = std::log(2.0) + boost::math::lgamma(double(n) + 1) - boost::math::lgamma(double(d) + 2) -
                          boost::math::lgamma(double(n - d)) - std::log(boost::math::beta(d2 / 2, 0.5));
  auto f = [&](double rho) {
    if (rho <= 0) return 0.0;
    const double lambda = boost::math::ibeta(d / 2.0, d / 2.0, rho * rho / 4);
    return std::exp(ln_front + (p + d2 - 1) * std::log(rho) + double(n - d - 1) * std::log1p(-lambda) +
                    (d2 / 2 - 1) * std::log1p(-rho * rho / 4));
  };
  // Split at the natural scale so the peak is resolved.
  const double s = std::pow(double(n), -1.0 / d);
  double total = 0, a = 0;
  for (double m : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double b = std::min(std::sqrt(2.0), m * s * 4);
    if (b > a) total += oracle_test::integrate(f, a, b);
    a = b;
  }
  if (a < std::sqrt(2.0)) total += oracle_test::integrate(f, a, std::sqrt(2.0));
  return total;
}

}  // namespace

TEST_CASE("quadrature reproduces the exact d=2 facet count") {
  const auto m = oracle::moment_quadrature(Dimension(2), 0, 1000);
  CHECK(std::abs(m.value - 1996) < 0.5);
  CHECK(m.method == PredictionMethod::kQuadrature);
  CHECK(m.value >= 0);
}

TEST_CASE("quadrature agrees with an independent Boost evaluation") {
  for (int d = 1; d <= 5; ++d) {
    for (double p : {0.0, 1.0, 2.5, double(d)}) {
      for (long long n : {50LL, 1000LL, 20000LL}) {
        const double ours = oracle::moment_quadrature(Dimension(d), p, n).value;
        const double ref = boost_moment(d, p, n);
        CAPTURE(d);
        CAPTURE(p);
        CAPTURE(n);
        CHECK(std::abs(ours / ref - 1) < 1e-7);
      }
    }
  }
}

TEST_CASE("quadrature matches the exact d=2 Gamma-ratio form") {
  for (long long n : {100LL, 1000LL, 10000LL, 100000LL}) {
    for (int p = 0; p <= 4; ++p) {
      const double q = oracle::moment_quadrature(Dimension(2), p, n).value;
      const double e = oracle::moment_exact_d2(p, n).value;
      CHECK(std::abs(q / e - 1) < 2e-3);
    }
  }
}

TEST_CASE("d=3, p=3 approaches c_{3,3}") {
  const double c = constants::c_moment(Dimension(3), 3);
  double prev = 1e300;
  for (long long n : {1000LL, 10000LL, 100000LL}) {
    const double residual = std::abs(oracle::moment_quadrature(Dimension(3), 3, n).value - c);
    CHECK(residual < prev);
    prev = residual;
  }
  CHECK(prev / c < 0.01);
}

TEST_CASE("asymptotic form") {
  for (int d = 1; d <= 8; ++d) {
    const auto m = oracle::moment_asymptotic(Dimension(d), 0, 500);
    CHECK(std::abs(m.value / (constants::big_b(Dimension(d)) * 500) - 1) < 1e-12);
  }
  // Converges to c_{d,p} n^{1-p/d}.
  for (double p : {1.0, 2.0, 3.0}) {
    const long long n = 100000000;
    const double a = oracle::moment_asymptotic(Dimension(2), p, n).value;
    CHECK(std::abs(a / (constants::c_moment(Dimension(2), p) * std::pow(double(n), 1 - p / 2)) - 1) < 1e-6);
  }
  CHECK(std::abs(oracle::moment_asymptotic(Dimension(2), 2, 100).value / 16 - 1) < 0.01);
}

TEST_CASE("quadrature minus asymptotic decays like n^{-2/d}") {
  for (int d : {2, 3}) {
    for (double p : {1.0, 2.0}) {
      std::vector<double> k;
      for (long long n : {1000LL, 10000LL, 100000LL}) {
        const double q = oracle::moment_quadrature(Dimension(d), p, n).value;
        const double a = oracle::moment_asymptotic(Dimension(d), p, n).value;
        k.push_back(std::abs(q - a) / a * std::pow(double(n), 2.0 / d));
      }
      CAPTURE(d);
      CAPTURE(p);
      CHECK(k[1] / k[0] > 0.7);
      CHECK(k[1] / k[0] < 1.4);
      CHECK(k[2] / k[1] > 0.7);
      CHECK(k[2] / k[1] < 1.4);
    }
  }
}

TEST_CASE("mean cap-area sums") {
  for (long long n : {1000LL, 10000LL, 100000LL}) {
    const double v = oracle::mean_cap_area_sum(Dimension(2), n);
    CHECK(std::abs(v / (4 - 12.0 / n) - 1) < 0.01);
    CHECK(std::abs(v - 2.0 * (2 * n - 4) / (n + 1)) < 1e-6);
  }
  const double v3 = oracle::mean_cap_area_sum(Dimension(3), 100000);
  CHECK(std::abs(v3 / (3 * constants::big_b(Dimension(3))) - 1) < 0.02);
  const double small = oracle::mean_cap_area_sum(Dimension(2), 10);
  CHECK(small > 0);
  CHECK(small < 4);
}

TEST_CASE("quadrature is converged and finite for large n") {
  for (int d : {1, 2, 3, 4, 5}) {
    oracle::QuadratureOptions tight;
    tight.rel_tol = 5e-9;
    const double a = oracle::moment_quadrature(Dimension(d), 2, 5000).value;
    const double b = oracle::moment_quadrature(Dimension(d), 2, 5000, tight).value;
    CHECK(std::abs(a / b - 1) < 1e-6);
  }
  for (int d = 1; d <= 8; ++d) {
    const auto m = oracle::moment_quadrature(Dimension(d), 1.5, 10000000);
    CHECK(std::isfinite(m.value));
    CHECK(m.value > 0);
  }
}

TEST_CASE("oracle argument checks") {
  CHECK_THROWS_AS(oracle::moment_quadrature(Dimension(2), -1, 100), DomainError);
  CHECK_THROWS_AS(oracle::moment_quadrature(Dimension(3), 1, 4), DomainError);
  CHECK_THROWS_AS(oracle::moment_asymptotic(Dimension(2), 1, 3), DomainError);
  CHECK_THROWS_AS(oracle::moment_exact_d2(1, 3), DomainError);
  CHECK_THROWS_AS(oracle::mean_cap_area_sum(Dimension(2), 3), DomainError);
  CHECK(to_string(PredictionMethod::kExactD2) == "exact-d2");
}
