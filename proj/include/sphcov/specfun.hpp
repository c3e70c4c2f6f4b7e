#pragma once

// Scalar special functions: log-gamma, beta, the regularized incomplete
// beta and gamma functions, a restricted Gauss hypergeometric series and
// partial harmonic sums. All functions are pure and throw DomainError
// outside their documented domain.

namespace sphcov::specfun {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Natural log of Gamma(x) for x > 0.
double ln_gamma(double x);

/// Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
double beta(double a, double b);

/// Log of B(a, b).
double ln_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b) for x in [0, 1].
///
/// Evaluated by a modified-Lentz continued fraction on whichever of
/// I_x(a,b) and 1 - I_{1-x}(b,a) converges faster.
double reg_inc_beta(double x, double a, double b);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double reg_inc_gamma_p(double a, double x);

/// Upper complement Q(a, x) = 1 - P(a, x), accurate in the far tail.
double reg_inc_gamma_q(double a, double x);

/// Gauss hypergeometric 2F1(a, b; c; z) by power series, z in [0, 1/2].
/// Terminates exactly when a or b is a nonpositive integer.
double gauss_2f1(double a, double b, double c, double z);

/// Partial harmonic sum 1/k + 1/(k+1) + ... + 1/n, smallest term first.
double harmonic(long long n, long long k = 1);

}  // namespace sphcov::specfun
