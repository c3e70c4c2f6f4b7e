#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sphcov/empirical.hpp"
#include "sphcov/sampling.hpp"

namespace sphcov {

enum class StatisticKind {
  kMoment,            // sum rho_k^p
  kFacetCount,        // f_d
  kCovering,          // geodesic covering radius
  kCoveringRho,       // Euclidean covering radius
  kSeparation,        // geodesic separation theta_min
  kScaledSeparation,  // N^{2/d} theta_min
  kGap,               // k-th largest circle gap (d = 1)
  kWeightedRho2,      // sum (A_k / A_N) rho_k^2
  kCapAreaSum,        // sum sigma_d(C_rho_k)
  kScaledHoleRadii,   // pooled N^{1/d} rho_k
  kAngleDist,         // pooled pairwise angles
};

struct Statistic {
  StatisticKind kind = StatisticKind::kFacetCount;
  double p = 0.0;   // kMoment
  long long k = 0;  // kGap

  /// "moment:2", "gap:3", "facet_count", ...
  static Statistic parse(const std::string& text);
  std::string name() const;
  bool pooled() const;  // yields many samples per trial
};

struct ExperimentConfig {
  int d = 2;
  std::size_t n_points = 100;
  std::size_t n_trials = 1;
  std::uint64_t master_seed = 0;
  Statistic statistic{};
  unsigned workers = 1;
  bool keep_raw = true;

  void validate() const;
};

/// A trial that hit a degenerate sample and was redrawn.
struct RetryRecord {
  std::size_t trial = 0;
  std::uint64_t attempt = 0;
  std::string reason;
};

struct RunResult {
  ExperimentConfig config;
  Estimate estimate;                                 // over per-trial values
  std::vector<double> per_trial;                     // indexed by trial
  std::optional<EmpiricalDistribution> distribution; // pooled statistics
  std::vector<RetryRecord> retries;
  std::vector<std::vector<double>> trial_values;     // pooled statistics with keep_raw
};

namespace montecarlo {

inline constexpr int kMaxRetries = 3;

/// Measurement applied to one sampled configuration.
using Measure = std::function<std::vector<double>(const Configuration&)>;

/// Samples every trial of `config` and applies `measure`, in parallel over
/// `config.workers` threads. Output slot t always holds trial t, so results do
/// not depend on the worker count. A DegenerateError triggers a replacement
/// draw (attempt 1..kMaxRetries) logged in `retries`.
std::vector<std::vector<double>> run_trials(const ExperimentConfig& config, const Measure& measure,
                                            std::vector<RetryRecord>* retries = nullptr);

/// Per-configuration value(s) of a statistic.
std::vector<double> measure_statistic(const Statistic& stat, const Configuration& config);

RunResult run(const ExperimentConfig& config);

EmpiricalDistribution scaled_separation_cdf(const ExperimentConfig& config);
EmpiricalDistribution scaled_hole_radii_pool(const ExperimentConfig& config);

/// Mean of the k-th largest gap for every k = 1..N (d = 1).
std::vector<Estimate> gap_experiment(const ExperimentConfig& config);

struct BoundsRow {
  double eps = 0.0;
  double empirical = 0.0;  // P(theta_min >= eps)
  double sigma = 0.0;      // binomial standard error
  double upper = 0.0;      // prod (1 - k A_d(eps/2))
  double lower = 0.0;      // prod (1 - k A_d(eps))
  double lower_linear = 0.0;  // 1 - kappa_d C(N,2) eps^d
};

struct BoundsReport {
  std::vector<BoundsRow> rows;
  double prob_scaled_ge_c = 0.0;  // P(N^{2/d} theta_min >= C_d)
  double prob_sigma = 0.0;
  double prob_bound = 0.0;        // 1 - Gamma(1 + 1/d)^d
  Estimate scaled_mean;           // N^{2/d} theta_min
  double mean_lower_bound = 0.0;  // C_d (d+1)^{-1/d} / Gamma(2 + 1/d)
};

/// Separation probability bounds on an eps grid where C(N,2) A_d(eps) <= 1.
BoundsReport bounds_experiment(const ExperimentConfig& config, std::size_t grid_points = 12);

struct TrendRow {
  std::size_t n = 0;
  Estimate covering_rho;
  Estimate covering_alpha;
  double predicted_rho = 0.0;    // c_d (log n / n)^{1/d}
  double ratio = 0.0;            // mean covering_rho / predicted_rho
  double ratio_std_error = 0.0;
  double exact_alpha = 0.0;      // d = 1 only: (pi/n) H_n
  double mean_hole_ratio = 0.0;  // (E sum rho / E f) / (E_{d,1} n^{-1/d})
};

/// Report-only covering radius ladder; `config.n_points` is ignored.
std::vector<TrendRow> covering_trend(const ExperimentConfig& config,
                                     const std::vector<std::size_t>& ladder);

}  // namespace montecarlo
}  // namespace sphcov
