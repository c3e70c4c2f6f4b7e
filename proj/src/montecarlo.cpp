#include "sphcov/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sphcov/constants.hpp"
#include "sphcov/errors.hpp"
#include "sphcov/hull.hpp"
#include "sphcov/metrics.hpp"
#include "sphcov/specfun.hpp"

namespace sphcov {

Statistic Statistic::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto need_arg = [&]() {
    if (arg.empty()) throw DomainError("statistic '" + head + "' needs a parameter, e.g. " + head + ":2");
  };
  Statistic s;
  if (head == "moment") {
    need_arg();
    s.kind = StatisticKind::kMoment;
    s.p = std::stod(arg);
    if (!(s.p >= 0.0)) throw DomainError("moment: requires p >= 0");
  } else if (head == "gap") {
    need_arg();
    s.kind = StatisticKind::kGap;
    s.k = std::stoll(arg);
  } else if (head == "facet_count") {
    s.kind = StatisticKind::kFacetCount;
  } else if (head == "covering") {
    s.kind = StatisticKind::kCovering;
  } else if (head == "covering_rho") {
    s.kind = StatisticKind::kCoveringRho;
  } else if (head == "separation") {
    s.kind = StatisticKind::kSeparation;
  } else if (head == "scaled_separation") {
    s.kind = StatisticKind::kScaledSeparation;
  } else if (head == "weighted_rho2") {
    s.kind = StatisticKind::kWeightedRho2;
  } else if (head == "cap_area_sum") {
    s.kind = StatisticKind::kCapAreaSum;
  } else if (head == "scaled_hole_radii") {
    s.kind = StatisticKind::kScaledHoleRadii;
  } else if (head == "angle_dist") {
    s.kind = StatisticKind::kAngleDist;
  } else {
    throw DomainError("unknown statistic '" + text + "'");
  }
  return s;
}

std::string Statistic::name() const {
  switch (kind) {
    case StatisticKind::kMoment: {
      std::string p_text = std::to_string(p);
      p_text.erase(p_text.find_last_not_of('0') + 1);
      if (p_text.back() == '.') p_text.pop_back();
      return "moment:" + p_text;
    }
    case StatisticKind::kFacetCount: return "facet_count";
    case StatisticKind::kCovering: return "covering";
    case StatisticKind::kCoveringRho: return "covering_rho";
    case StatisticKind::kSeparation: return "separation";
    case StatisticKind::kScaledSeparation: return "scaled_separation";
    case StatisticKind::kGap: return "gap:" + std::to_string(k);
    case StatisticKind::kWeightedRho2: return "weighted_rho2";
    case StatisticKind::kCapAreaSum: return "cap_area_sum";
    case StatisticKind::kScaledHoleRadii: return "scaled_hole_radii";
    case StatisticKind::kAngleDist: return "angle_dist";
  }
  return "unknown";
}

bool Statistic::pooled() const {
  return kind == StatisticKind::kScaledHoleRadii || kind == StatisticKind::kAngleDist;
}

void ExperimentConfig::validate() const {
  (void)Dimension(d);
  if (n_trials < 1) throw DomainError("experiment: requires trials >= 1");
  if (n_points < 2) throw DomainError("experiment: requires n >= 2");
  if (workers < 1) throw DomainError("experiment: requires workers >= 1");
  switch (statistic.kind) {
    case StatisticKind::kGap:
      if (d != 1) throw DomainError("gap statistic requires d = 1");
      if (statistic.k < 1 || statistic.k > static_cast<long long>(n_points)) {
        throw DomainError("gap statistic requires 1 <= k <= n");
      }
      break;
    case StatisticKind::kSeparation:
    case StatisticKind::kScaledSeparation:
    case StatisticKind::kAngleDist:
      break;
    default:
      if (d > kMaxHullDimension) throw DomainError("hull statistics require d <= 5");
      if (n_points < static_cast<std::size_t>(d + 2)) {
        throw DomainError("hull statistics require n >= d+2");
      }
  }
}

namespace montecarlo {

std::vector<std::vector<double>> run_trials(const ExperimentConfig& config, const Measure& measure,
                                            std::vector<RetryRecord>* retries) {
  config.validate();
  const Dimension d(config.d);
  std::vector<std::vector<double>> out(config.n_trials);
  std::vector<std::vector<RetryRecord>> retry_log(config.n_trials);
  std::vector<std::exception_ptr> errors(config.n_trials);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t t = next++; t < config.n_trials; t = next++) {
      try {
        for (std::uint64_t attempt = 0;; ++attempt) {
          const Configuration sample = sampling::sample_uniform(
              d, config.n_points, SeedSpec{config.master_seed, t}, attempt);
          try {
            out[t] = measure(sample);
            break;
          } catch (const DegenerateError& e) {
            if (attempt >= static_cast<std::uint64_t>(kMaxRetries)) throw;
            retry_log[t].push_back({t, attempt + 1, e.what()});
          }
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(config.workers, config.n_trials));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  if (retries) {
    for (auto& log : retry_log) retries->insert(retries->end(), log.begin(), log.end());
  }
  return out;
}

std::vector<double> measure_statistic(const Statistic& stat, const Configuration& config) {
  const int d = config.dimension().value();
  const double n = static_cast<double>(config.size());
  switch (stat.kind) {
    case StatisticKind::kSeparation:
      return {metrics::separation(config).theta_min};
    case StatisticKind::kScaledSeparation:
      return {std::pow(n, 2.0 / d) * metrics::separation(config).theta_min};
    case StatisticKind::kGap: {
      const auto gaps = metrics::circle_gaps(config);
      return {gaps.at(static_cast<std::size_t>(stat.k - 1))};
    }
    case StatisticKind::kAngleDist:
      return metrics::pairwise_angle_distribution(config).samples();
    default:
      break;
  }
  const HullResult hull = hull::convex_hull(config);
  const HoleSummary holes = metrics::hole_radii(config, hull);
  switch (stat.kind) {
    case StatisticKind::kMoment: return {metrics::moment_sum(holes, stat.p)};
    case StatisticKind::kFacetCount: return {static_cast<double>(hull.facet_count)};
    case StatisticKind::kCovering: return {holes.covering_alpha};
    case StatisticKind::kCoveringRho: return {holes.covering_rho};
    case StatisticKind::kWeightedRho2:
      return {metrics::weighted_facet_stat(config, hull, holes).weighted_rho2};
    case StatisticKind::kCapAreaSum: return {holes.cap_area_sum};
    case StatisticKind::kScaledHoleRadii: {
      const double scale = std::pow(n, 1.0 / d);
      std::vector<double> scaled(holes.rho.size());
      std::transform(holes.rho.begin(), holes.rho.end(), scaled.begin(),
                     [scale](double r) { return scale * r; });
      return scaled;
    }
    default:
      throw DomainError("measure_statistic: unhandled statistic");
  }
}

RunResult run(const ExperimentConfig& config) {
  RunResult r;
  r.config = config;
  const Statistic stat = config.statistic;
  auto values = run_trials(
      config, [&stat](const Configuration& c) { return measure_statistic(stat, c); }, &r.retries);

  r.per_trial.resize(values.size());
  if (stat.pooled() || stat.kind == StatisticKind::kScaledSeparation) {
    std::vector<double> pool;
    for (std::size_t t = 0; t < values.size(); ++t) {
      const auto& v = values[t];
      double s = 0.0;
      for (double x : v) s += x;
      r.per_trial[t] = v.empty() ? 0.0 : s / static_cast<double>(v.size());
      pool.insert(pool.end(), v.begin(), v.end());
    }
    r.distribution = EmpiricalDistribution(std::move(pool));
    if (config.keep_raw && stat.pooled()) r.trial_values = std::move(values);
  } else {
    for (std::size_t t = 0; t < values.size(); ++t) r.per_trial[t] = values[t].at(0);
  }
  r.estimate = make_estimate(r.per_trial, config.keep_raw);
  return r;
}

EmpiricalDistribution scaled_separation_cdf(const ExperimentConfig& config) {
  if (config.statistic.kind != StatisticKind::kScaledSeparation) {
    throw DomainError("scaled_separation_cdf: statistic must be scaled_separation");
  }
  return *run(config).distribution;
}

EmpiricalDistribution scaled_hole_radii_pool(const ExperimentConfig& config) {
  if (config.statistic.kind != StatisticKind::kScaledHoleRadii) {
    throw DomainError("scaled_hole_radii_pool: statistic must be scaled_hole_radii");
  }
  return *run(config).distribution;
}

std::vector<Estimate> gap_experiment(const ExperimentConfig& config) {
  if (config.d != 1) throw DomainError("gap_experiment: requires d = 1");
  ExperimentConfig c = config;
  c.statistic = Statistic{StatisticKind::kGap, 0.0, 1};
  auto values = run_trials(c, [](const Configuration& s) { return metrics::circle_gaps(s); });
  std::vector<Estimate> out;
  std::vector<double> column(values.size());
  for (std::size_t k = 0; k < config.n_points; ++k) {
    for (std::size_t t = 0; t < values.size(); ++t) column[t] = values[t][k];
    out.push_back(make_estimate(column));
  }
  return out;
}

BoundsReport bounds_experiment(const ExperimentConfig& config, std::size_t grid_points) {
  if (config.statistic.kind != StatisticKind::kSeparation) {
    throw DomainError("bounds_experiment: statistic must be separation");
  }
  const Dimension d(config.d);
  const double n = static_cast<double>(config.n_points);
  const double pairs = n * (n - 1.0) / 2.0;
  auto values = run_trials(config, [](const Configuration& c) {
    return std::vector<double>{metrics::separation(c).theta_min};
  });
  std::vector<double> sep(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) sep[t] = values[t][0];
  const double trials = static_cast<double>(sep.size());

  // Largest eps with C(N,2) A_d(eps) <= 1.
  double lo = 0.0, hi = specfun::kPi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (pairs * constants::cap_area_geodesic(d, mid) <= 1.0 ? lo : hi) = mid;
  }
  BoundsReport report;
  for (std::size_t g = 1; g <= grid_points; ++g) {
    BoundsRow row;
    row.eps = lo * static_cast<double>(g) / static_cast<double>(grid_points);
    const double hits = static_cast<double>(
        std::count_if(sep.begin(), sep.end(), [&](double s) { return s >= row.eps; }));
    row.empirical = hits / trials;
    row.sigma = std::sqrt(std::max(row.empirical * (1.0 - row.empirical), 1.0 / trials) / trials);
    const double a_half = constants::cap_area_geodesic(d, row.eps / 2.0);
    const double a_full = constants::cap_area_geodesic(d, row.eps);
    row.upper = 1.0;
    row.lower = 1.0;
    for (std::size_t k = 1; k < config.n_points; ++k) {
      row.upper *= 1.0 - static_cast<double>(k) * a_half;
      row.lower *= 1.0 - static_cast<double>(k) * a_full;
    }
    row.lower_linear = 1.0 - constants::kappa(d) * pairs * std::pow(row.eps, d.value());
    report.rows.push_back(row);
  }

  const double scale = std::pow(n, 2.0 / d.value());
  const double c_d = constants::sep_c(d);
  std::vector<double> scaled(sep.size());
  std::transform(sep.begin(), sep.end(), scaled.begin(), [scale](double s) { return scale * s; });
  const double above = static_cast<double>(
      std::count_if(scaled.begin(), scaled.end(), [c_d](double s) { return s >= c_d; }));
  report.prob_scaled_ge_c = above / trials;
  report.prob_sigma = std::sqrt(
      std::max(report.prob_scaled_ge_c * (1.0 - report.prob_scaled_ge_c), 1.0 / trials) / trials);
  report.prob_bound = constants::sep_prob_bound(d);
  report.scaled_mean = make_estimate(scaled);
  report.mean_lower_bound = c_d * constants::sep_lower_factor(d);
  return report;
}

std::vector<TrendRow> covering_trend(const ExperimentConfig& config,
                                     const std::vector<std::size_t>& ladder) {
  const Dimension d(config.d);
  std::vector<TrendRow> rows;
  for (std::size_t n : ladder) {
    ExperimentConfig c = config;
    c.n_points = n;
    c.statistic = Statistic{StatisticKind::kCoveringRho, 0.0, 0};
    auto values = run_trials(c, [](const Configuration& s) {
      const HullResult hull = hull::convex_hull(s);
      const HoleSummary holes = metrics::hole_radii(s, hull);
      return std::vector<double>{holes.covering_rho, holes.covering_alpha,
                                 metrics::moment_sum(holes, 1.0),
                                 static_cast<double>(hull.facet_count)};
    });
    std::vector<double> rho(values.size()), alpha(values.size());
    double sum_rho = 0.0, sum_f = 0.0;
    for (std::size_t t = 0; t < values.size(); ++t) {
      rho[t] = values[t][0];
      alpha[t] = values[t][1];
      sum_rho += values[t][2];
      sum_f += values[t][3];
    }
    const double nn = static_cast<double>(n);
    TrendRow row;
    row.n = n;
    row.covering_rho = make_estimate(rho);
    row.covering_alpha = make_estimate(alpha);
    row.predicted_rho = constants::covering_coeff(d) * std::pow(std::log(nn) / nn, 1.0 / d.value());
    row.ratio = row.covering_rho.mean / row.predicted_rho;
    row.ratio_std_error = row.covering_rho.std_error / row.predicted_rho;
    if (d.value() == 1) row.exact_alpha = constants::circle_cov_mean(static_cast<long long>(n));
    row.mean_hole_ratio =
        (sum_rho / sum_f) / (constants::e_moment(d, 1.0) * std::pow(nn, -1.0 / d.value()));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace montecarlo
}  // namespace sphcov
