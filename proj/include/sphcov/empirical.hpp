#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sphcov {

/// Monte Carlo summary of one scalar statistic.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(trials)
  std::size_t trials = 0;
  double variance = 0.0;           // unbiased sample variance
  double variance_std_error = 0.0; // large-sample standard error of `variance`
  std::vector<double> raw_samples; // empty unless requested
};

Estimate make_estimate(std::span<const double> values, bool keep_raw = false);

/// Sorted sample with a right-continuous step CDF.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t count() const noexcept { return samples_.size(); }
  const std::vector<double>& samples() const noexcept { return samples_; }

  double cdf(double x) const;
  double mean() const;
  double variance() const;
  double moment(double p) const;  // mean of x^p

  /// Two-sided Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)| to a
  /// continuous reference CDF.
  double ks_distance(const std::function<double(double)>& reference_cdf) const;

 private:
  std::vector<double> samples_;
};

}  // namespace sphcov
