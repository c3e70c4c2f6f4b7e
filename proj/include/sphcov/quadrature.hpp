#pragma once

#include <functional>
#include <span>

namespace sphcov::quad {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int subdivisions = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration over [a, b].
/// `breaks` are optional interior points where the integrand changes scale.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {}, std::span<const double> breaks = {});

}  // namespace sphcov::quad
