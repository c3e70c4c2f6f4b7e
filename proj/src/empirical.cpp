#include "sphcov/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sphcov/errors.hpp"

namespace sphcov {

Estimate make_estimate(std::span<const double> values, bool keep_raw) {
  Estimate e;
  e.trials = values.size();
  if (values.empty()) return e;
  const double n = static_cast<double>(values.size());
  e.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double c = (v - e.mean) * (v - e.mean);
    m2 += c;
    m4 += c * c;
  }
  if (values.size() > 1) {
    e.variance = m2 / (n - 1.0);
    e.std_error = std::sqrt(e.variance / n);
    const double pop_m2 = m2 / n;
    e.variance_std_error = std::sqrt(std::max(0.0, (m4 / n - pop_m2 * pop_m2) / n));
  }
  if (keep_raw) e.raw_samples.assign(values.begin(), values.end());
  return e;
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  if (samples_.empty()) return 0.0;
  auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::mean() const {
  if (samples_.empty()) throw DomainError("EmpiricalDistribution: empty sample");
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
         static_cast<double>(samples_.size());
}

double EmpiricalDistribution::variance() const {
  if (samples_.size() < 2) throw DomainError("EmpiricalDistribution: need two samples");
  const double m = mean();
  double s = 0.0;
  for (double v : samples_) s += (v - m) * (v - m);
  return s / static_cast<double>(samples_.size() - 1);
}

double EmpiricalDistribution::moment(double p) const {
  if (samples_.empty()) throw DomainError("EmpiricalDistribution: empty sample");
  double s = 0.0;
  for (double v : samples_) s += std::pow(v, p);
  return s / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::ks_distance(const std::function<double(double)>& reference_cdf) const {
  const double n = static_cast<double>(samples_.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < samples_.size()) {
    // Ties share one jump of the step function.
    std::size_t j = i;
    while (j < samples_.size() && samples_[j] == samples_[i]) ++j;
    const double f = reference_cdf(samples_[i]);
    worst = std::max(worst, std::fabs(f - static_cast<double>(i) / n));
    worst = std::max(worst, std::fabs(static_cast<double>(j) / n - f));
    i = j;
  }
  return worst;
}

}  // namespace sphcov
