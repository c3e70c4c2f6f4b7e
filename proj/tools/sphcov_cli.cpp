#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sphcov/constants.hpp"
#include "sphcov/errors.hpp"
#include "sphcov/hull.hpp"
#include "sphcov/io_util.hpp"
#include "sphcov/metrics.hpp"
#include "sphcov/montecarlo.hpp"
#include "sphcov/oracle.hpp"
#include "sphcov/sampling.hpp"
#include "sphcov/specfun.hpp"

#ifndef SPHCOV_BUILD_ID
#define SPHCOV_BUILD_ID "unknown"
#endif

using nlohmann::ordered_json;
using namespace sphcov;

namespace {

constexpr int kFormatVersion = 1;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    io::write_atomic(out_path, text);
  }
}

ordered_json header(const std::string& command) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["build"] = SPHCOV_BUILD_ID;
  j["command"] = command;
  return j;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------- references

struct Reference {
  double value = std::nan("");
  std::string source;
};

// Predicted mean of a per-trial statistic.
std::vector<Reference> references_for(const ExperimentConfig& c) {
  const Dimension d(c.d);
  const double n = static_cast<double>(c.n_points);
  const auto nn = static_cast<long long>(c.n_points);
  const bool hull_ok = c.d <= kMaxHullDimension && c.n_points >= static_cast<std::size_t>(c.d + 2);
  std::vector<Reference> refs;
  switch (c.statistic.kind) {
    case StatisticKind::kMoment: {
      const double p = c.statistic.p;
      if (hull_ok) {
        refs.push_back({oracle::moment_quadrature(d, p, nn).value,
                        "finite-N moment integral (quadrature)"});
      }
      refs.push_back({oracle::moment_asymptotic(d, p, nn).value, "Gamma-ratio leading term"});
      refs.push_back({constants::c_moment(d, p) * std::pow(n, 1.0 - p / c.d),
                      "c_{d,p} N^{1-p/d}"});
      if (c.d == 2) refs.push_back({oracle::moment_exact_d2(p, nn).value, "exact d=2 Gamma-ratio form"});
      break;
    }
    case StatisticKind::kFacetCount:
      if (c.d == 1) refs.push_back({n, "f_1 = N"});
      if (c.d == 2) refs.push_back({2.0 * n - 4.0, "f_2 = 2N - 4"});
      if (c.d > 2 && hull_ok) {
        refs.push_back({oracle::moment_quadrature(d, 0.0, nn).value,
                        "finite-N moment integral at p = 0"});
      }
      refs.push_back({constants::big_b(d) * n, "B_d N"});
      break;
    case StatisticKind::kCovering:
      if (c.d == 1) refs.push_back({constants::circle_cov_mean(nn), "(pi/N) H_N"});
      refs.push_back({2.0 * std::asin(std::min(1.0, constants::covering_coeff(d) *
                                                         std::pow(std::log(n) / n, 1.0 / c.d) / 2.0)),
                      "geodesic form of c_d (log N / N)^{1/d} (conjectural)"});
      break;
    case StatisticKind::kCoveringRho:
      refs.push_back({constants::covering_coeff(d) * std::pow(std::log(n) / n, 1.0 / c.d),
                      "c_d (log N / N)^{1/d} (conjectural)"});
      break;
    case StatisticKind::kSeparation:
      refs.push_back({constants::sep_c(d) * std::pow(n, -2.0 / c.d), "C_d N^{-2/d}"});
      break;
    case StatisticKind::kScaledSeparation:
      refs.push_back({constants::sep_c(d), "C_d, limit mean of N^{2/d} theta_min"});
      break;
    case StatisticKind::kGap:
      refs.push_back({constants::circle_gap_mean(nn, c.statistic.k), "(2 pi/N) H_{N,k}"});
      break;
    case StatisticKind::kWeightedRho2:
      refs.push_back({std::exp(specfun::ln_gamma(c.d + 1.0 + 2.0 / c.d) - specfun::ln_gamma(c.d + 1.0)) *
                          std::pow(constants::kappa(d), -2.0 / c.d) * std::pow(n, -2.0 / c.d),
                      "Gamma(d+1+2/d)/Gamma(d+1) kappa_d^{-2/d} N^{-2/d}"});
      break;
    case StatisticKind::kCapAreaSum:
      if (c.d == 2) refs.push_back({2.0 * (2.0 * n - 4.0) / (n + 1.0), "exact d=2: 2(2N-4)/(N+1)"});
      if (hull_ok) refs.push_back({oracle::mean_cap_area_sum(d, nn), "finite-N cap-area integral"});
      refs.push_back({c.d * constants::big_b(d), "d B_d"});
      break;
    case StatisticKind::kScaledHoleRadii:
      refs.push_back({constants::e_moment(d, 1.0), "E_{d,1}, mean of the limiting hole-radius law"});
      break;
    case StatisticKind::kAngleDist:
      refs.push_back({specfun::kPi / 2.0, "mean of the pairwise angle density"});
      break;
  }
  return refs;
}

ordered_json curve_table(const ExperimentConfig& c, std::size_t points = 401) {
  const Dimension d(c.d);
  ordered_json curve;
  std::function<double(double)> pdf, cdf;
  double hi = 0.0;
  std::string name;
  switch (c.statistic.kind) {
    case StatisticKind::kScaledHoleRadii:
      name = "hole_radius_law";
      pdf = [d](double x) { return constants::hole_pdf(d, x); };
      cdf = [d](double x) { return constants::hole_cdf(d, x); };
      hi = 1.0;
      while (constants::hole_cdf(d, hi) < 1.0 - 1e-9) hi *= 1.25;
      break;
    case StatisticKind::kScaledSeparation: {
      name = "separation_extreme_law";
      const double k = constants::kappa(d) / 2.0;
      pdf = [k, dd = c.d](double t) {
        return t <= 0.0 ? 0.0 : k * dd * std::pow(t, dd - 1) * std::exp(-k * std::pow(t, dd));
      };
      cdf = [d](double t) { return constants::sep_limit_cdf(d, t); };
      hi = std::pow(std::log(1e9) / k, 1.0 / c.d);
      break;
    }
    case StatisticKind::kAngleDist:
      name = "pairwise_angle_density";
      pdf = [d](double t) { return constants::angle_pdf(d, t); };
      hi = specfun::kPi;
      break;
    default:
      return nullptr;
  }
  curve["name"] = name;
  curve["d"] = c.d;
  ordered_json xs = ordered_json::array(), ps = ordered_json::array(), cs = ordered_json::array();
  for (std::size_t i = 0; i < points; ++i) {
    const double x = hi * static_cast<double>(i) / static_cast<double>(points - 1);
    xs.push_back(x);
    ps.push_back(pdf(x));
    if (cdf) cs.push_back(cdf(x));
  }
  curve["x"] = xs;
  curve["pdf"] = ps;
  if (cdf) curve["cdf"] = cs;
  return curve;
}

ordered_json estimate_json(const Estimate& e) {
  ordered_json j;
  j["mean"] = e.mean;
  j["stderr"] = e.std_error;
  j["trials"] = e.trials;
  j["variance"] = e.variance;
  j["variance_stderr"] = e.variance_std_error;
  return j;
}

ordered_json config_json(const ExperimentConfig& c, const std::string& mode) {
  ordered_json j;
  j["mode"] = mode;
  j["d"] = c.d;
  j["n"] = c.n_points;
  j["trials"] = c.n_trials;
  j["seed"] = c.master_seed;
  j["stat"] = c.statistic.name();
  j["workers"] = c.workers;
  return j;
}

// ---------------------------------------------------------------- commands

struct SampleArgs {
  int d = 2;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::uint64_t attempt = 0;
  std::string out;
};

int cmd_sample(const SampleArgs& a) {
  const auto c = sampling::sample_uniform(Dimension(a.d), a.n, SeedSpec{a.seed, a.trial}, a.attempt);
  emit(sampling::format_points(c), a.out);
  return 0;
}

int cmd_fibonacci(std::size_t n, const std::string& out) {
  emit(sampling::format_points(sampling::fibonacci_s2(n)), out);
  return 0;
}

int cmd_hull(const std::string& in, const std::string& out) {
  const auto config = sampling::load_external(in);
  const auto hull = hull::convex_hull(config);
  const int dim = config.ambient();
  std::string csv;
  for (int i = 0; i < dim; ++i) csv += "v" + std::to_string(i) + ",";
  for (int i = 0; i < dim; ++i) csv += "n" + std::to_string(i) + ",";
  csv += "offset,area\n";
  for (const auto& f : hull.facets) {
    for (auto v : f.vertex_indices) csv += std::to_string(v) + ",";
    for (double x : f.unit_normal) csv += io::format_double(x) + ",";
    csv += io::format_double(f.offset_a) + "," + io::format_double(f.area) + "\n";
  }
  emit(csv, out);
  if (!out.empty() && out != "-") {
    auto j = header("hull");
    j["input"] = in;
    j["d"] = hull.d;
    j["points"] = hull.point_count;
    j["facets"] = hull.facet_count;
    j["vertices"] = hull.vertex_count;
    j["origin_inside"] = hull.origin_inside;
    j["volume"] = hull.volume;
    j["surface_area"] = hull.surface_area;
    if (hull.euler_check) j["euler_check"] = *hull.euler_check;
    std::cout << dump(j);
  }
  return 0;
}

int cmd_metrics(const std::string& in, const std::string& stats_arg, const std::string& out) {
  const auto config = sampling::load_external(in);
  const int d = config.dimension().value();
  auto j = header("metrics");
  j["input"] = in;
  j["d"] = d;
  j["n"] = config.size();
  ordered_json stats;
  for (const auto& s : split(stats_arg, ',')) {
    if (s == "holes") {
      const auto hull = hull::convex_hull(config);
      const auto holes = metrics::hole_radii(config, hull);
      ordered_json h;
      h["facets"] = hull.facet_count;
      h["origin_inside"] = hull.origin_inside;
      h["covering_rho"] = holes.covering_rho;
      h["covering_alpha"] = holes.covering_alpha;
      h["cap_area_sum"] = holes.cap_area_sum;
      if (hull.origin_inside) h["weighted_rho2"] = holes.weighted_rho2;
      ordered_json moments;
      for (int p = 1; p <= 4; ++p) moments[std::to_string(p)] = metrics::moment_sum(holes, p);
      h["moments"] = moments;
      h["rho"] = holes.rho;
      stats["holes"] = h;
    } else if (s == "sep") {
      const auto sep = metrics::separation(config);
      ordered_json h;
      h["theta_min"] = sep.theta_min;
      h["euclid_min"] = sep.euclid_min;
      h["argmin_pair"] = {sep.argmin_pair.first, sep.argmin_pair.second};
      h["scaled"] = std::pow(static_cast<double>(config.size()), 2.0 / d) * sep.theta_min;
      stats["sep"] = h;
    } else if (s == "angles") {
      const auto dist = metrics::pairwise_angle_distribution(config);
      ordered_json h;
      h["count"] = dist.count();
      h["mean"] = dist.mean();
      h["ks_distance"] = dist.ks_distance([&](double t) {
        // CDF of the angle density by cap area: P(angle <= t) = sigma_d(cap of radius t).
        return constants::cap_area_geodesic(config.dimension(), std::clamp(t, 0.0, specfun::kPi));
      });
      stats["angles"] = h;
    } else if (s == "gaps") {
      stats["gaps"] = metrics::circle_gaps(config);
    } else {
      throw UsageError("unknown stat '" + s + "' (expected holes, sep, angles, gaps)");
    }
  }
  j["stats"] = stats;
  emit(dump(j), out);
  return 0;
}

int cmd_predict(int d, double p, long long n, const std::string& method, const std::string& out) {
  MomentPrediction m;
  if (method == "quadrature") {
    m = oracle::moment_quadrature(Dimension(d), p, n);
  } else if (method == "asymptotic") {
    m = oracle::moment_asymptotic(Dimension(d), p, n);
  } else {
    if (d != 2) throw DomainError("exact-d2 requires d = 2");
    m = oracle::moment_exact_d2(p, n);
  }
  auto j = header("predict");
  j["d"] = m.d;
  j["p"] = m.p;
  j["n"] = m.n;
  j["method"] = to_string(m.method);
  j["value"] = m.value;
  if (m.method == PredictionMethod::kQuadrature) j["quadrature_error"] = m.quadrature_error;
  j["scaled"] = m.value / std::pow(static_cast<double>(n), 1.0 - p / d);
  j["c_dp"] = constants::c_moment(Dimension(d), p);
  emit(dump(j), out);
  return 0;
}

int cmd_constants(int d, const std::vector<double>& ps, const std::string& format,
                  const std::string& out) {
  const auto t = constants::table(Dimension(d));
  std::vector<std::pair<std::string, double>> rows = {
      {"kappa", t.kappa},
      {"big_b", t.big_b},
      {"sep_c", t.sep_c},
      {"covering_coeff", t.covering_coeff},
      {"sep_var_limit", t.sep_var_limit},
      {"sep_lower_factor", t.sep_lower_factor},
      {"sep_prob_bound", t.sep_prob_bound},
  };
  std::vector<std::pair<double, std::pair<double, double>>> moments;
  for (double p : ps) {
    moments.push_back({p, {constants::e_moment(Dimension(d), p), constants::c_moment(Dimension(d), p)}});
  }
  std::string text;
  if (format == "json") {
    auto j = header("constants");
    j["d"] = d;
    for (const auto& [k, v] : rows) j[k] = v;
    ordered_json m = ordered_json::array();
    for (const auto& [p, ec] : moments) m.push_back({{"p", p}, {"e_dp", ec.first}, {"c_dp", ec.second}});
    j["moments"] = m;
    text = dump(j);
  } else if (format == "csv") {
    text = "name,p,value\n";
    for (const auto& [k, v] : rows) text += k + ",," + io::format_double(v) + "\n";
    for (const auto& [p, ec] : moments) {
      text += "e_dp," + io::format_double(p) + "," + io::format_double(ec.first) + "\n";
      text += "c_dp," + io::format_double(p) + "," + io::format_double(ec.second) + "\n";
    }
  } else {
    char buf[128];
    std::snprintf(buf, sizeof buf, "d = %d\n", d);
    text = buf;
    for (const auto& [k, v] : rows) {
      std::snprintf(buf, sizeof buf, "%-18s %.15g\n", k.c_str(), v);
      text += buf;
    }
    for (const auto& [p, ec] : moments) {
      std::snprintf(buf, sizeof buf, "E_{d,%g}%*s %.15g\nc_{d,%g}%*s %.15g\n", p, 10, "", ec.first, p,
                    10, "", ec.second);
      text += buf;
    }
  }
  emit(text, out);
  return 0;
}

struct ExperimentArgs {
  ExperimentConfig config;
  std::string stat = "facet_count";
  std::string mode = "run";
  std::string out;
  std::string csv;
  std::string ladder;
  std::size_t grid = 12;
  bool emit_curve = false;
};

std::vector<std::size_t> parse_ladder(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& item : split(s, ',')) out.push_back(std::stoull(item));
  if (out.empty()) throw UsageError("--ladder needs a comma-separated list of n");
  return out;
}

int cmd_experiment(ExperimentArgs a) {
  ExperimentConfig& c = a.config;
  c.statistic = Statistic::parse(a.stat);
  c.keep_raw = !a.csv.empty();
  auto j = header("experiment");
  j["config"] = config_json(c, a.mode);

  if (a.mode == "run") {
    c.validate();
    const RunResult r = montecarlo::run(c);
    j["statistic"] = c.statistic.name();
    j["estimate"] = estimate_json(r.estimate);
    j["mean"] = r.estimate.mean;
    j["stderr"] = r.estimate.std_error;
    if (r.distribution) {
      j["pooled_count"] = r.distribution->count();
      j["pooled_mean"] = r.distribution->mean();
      j["pooled_variance"] = r.distribution->variance();
    }
    ordered_json refs = ordered_json::array();
    for (const auto& ref : references_for(c)) {
      refs.push_back({{"value", ref.value}, {"source", ref.source}});
    }
    j["references"] = refs;
    if (a.emit_curve) {
      auto curve = curve_table(c);
      if (!curve.is_null()) {
        if (r.distribution && curve.contains("cdf")) {
          const auto& dist = *r.distribution;
          j["ks_distance"] = dist.ks_distance([&](double x) {
            return c.statistic.kind == StatisticKind::kScaledHoleRadii
                       ? constants::hole_cdf(Dimension(c.d), x)
                       : constants::sep_limit_cdf(Dimension(c.d), x);
          });
        }
        j["curve"] = curve;
      }
    }
    j["retries"] = r.retries.size();
    if (!a.csv.empty()) {
      std::string text = "trial,statistic,value\n";
      const std::string name = c.statistic.name();
      if (c.statistic.pooled()) {
        // One row per pooled sample.
        for (std::size_t t = 0; t < r.trial_values.size(); ++t) {
          for (double v : r.trial_values[t]) {
            text += std::to_string(t) + "," + name + "," + io::format_double(v) + "\n";
          }
        }
      } else {
        for (std::size_t t = 0; t < r.per_trial.size(); ++t) {
          text += std::to_string(t) + "," + name + "," + io::format_double(r.per_trial[t]) + "\n";
        }
      }
      io::write_atomic(a.csv, text);
    }
  } else if (a.mode == "gaps") {
    c.statistic = Statistic{StatisticKind::kGap, 0.0, 1};
    c.validate();
    const auto est = montecarlo::gap_experiment(c);
    ordered_json rows = ordered_json::array();
    std::string text = "k,mean,stderr,predicted\n";
    for (std::size_t k = 0; k < est.size(); ++k) {
      const double pred = constants::circle_gap_mean(static_cast<long long>(c.n_points),
                                                     static_cast<long long>(k + 1));
      rows.push_back({{"k", k + 1}, {"mean", est[k].mean}, {"stderr", est[k].std_error}, {"predicted", pred}});
      text += std::to_string(k + 1) + "," + io::format_double(est[k].mean) + "," +
              io::format_double(est[k].std_error) + "," + io::format_double(pred) + "\n";
    }
    j["rows"] = rows;
    j["references"] = {{{"source", "(2 pi/N) H_{N,k} per rank"}}};
    if (!a.csv.empty()) io::write_atomic(a.csv, text);
  } else if (a.mode == "bounds") {
    c.statistic = Statistic{StatisticKind::kSeparation, 0.0, 0};
    c.validate();
    const auto rep = montecarlo::bounds_experiment(c, a.grid);
    ordered_json rows = ordered_json::array();
    std::string text = "eps,empirical,sigma,upper,lower,lower_linear\n";
    for (const auto& r : rep.rows) {
      rows.push_back({{"eps", r.eps},
                      {"empirical", r.empirical},
                      {"sigma", r.sigma},
                      {"upper", r.upper},
                      {"lower", r.lower},
                      {"lower_linear", r.lower_linear}});
      text += io::format_double(r.eps) + "," + io::format_double(r.empirical) + "," +
              io::format_double(r.sigma) + "," + io::format_double(r.upper) + "," +
              io::format_double(r.lower) + "," + io::format_double(r.lower_linear) + "\n";
    }
    j["rows"] = rows;
    j["prob_scaled_ge_c"] = rep.prob_scaled_ge_c;
    j["prob_sigma"] = rep.prob_sigma;
    j["prob_bound"] = rep.prob_bound;
    j["scaled_mean"] = estimate_json(rep.scaled_mean);
    j["mean_lower_bound"] = rep.mean_lower_bound;
    j["references"] = {{{"value", rep.prob_bound}, {"source", "1 - Gamma(1+1/d)^d"}},
                       {{"value", rep.mean_lower_bound}, {"source", "C_d (d+1)^{-1/d} / Gamma(2+1/d)"}}};
    if (!a.csv.empty()) io::write_atomic(a.csv, text);
  } else if (a.mode == "trend") {
    const auto ladder = parse_ladder(a.ladder);
    c.statistic = Statistic{StatisticKind::kCoveringRho, 0.0, 0};
    for (auto n : ladder) {
      ExperimentConfig probe = c;
      probe.n_points = n;
      probe.validate();
    }
    const auto rows = montecarlo::covering_trend(c, ladder);
    ordered_json out = ordered_json::array();
    std::string text = "n,covering_rho,stderr,predicted_rho,ratio,ratio_stderr,covering_alpha,exact_alpha,mean_hole_ratio\n";
    for (const auto& r : rows) {
      ordered_json row;
      row["n"] = r.n;
      row["covering_rho"] = estimate_json(r.covering_rho);
      row["covering_alpha"] = estimate_json(r.covering_alpha);
      row["predicted_rho"] = r.predicted_rho;
      row["ratio"] = r.ratio;
      row["ratio_stderr"] = r.ratio_std_error;
      if (c.d == 1) row["exact_alpha"] = r.exact_alpha;
      row["mean_hole_ratio"] = r.mean_hole_ratio;
      out.push_back(row);
      text += std::to_string(r.n) + "," + io::format_double(r.covering_rho.mean) + "," +
              io::format_double(r.covering_rho.std_error) + "," + io::format_double(r.predicted_rho) + "," +
              io::format_double(r.ratio) + "," + io::format_double(r.ratio_std_error) + "," +
              io::format_double(r.covering_alpha.mean) + "," + io::format_double(r.exact_alpha) + "," +
              io::format_double(r.mean_hole_ratio) + "\n";
    }
    j["rows"] = out;
    j["report_only"] = true;
    j["references"] = {{{"source", "c_d (log N / N)^{1/d} (conjectural, report only)"}}};
    if (!a.csv.empty()) io::write_atomic(a.csv, text);
  } else if (a.mode == "ladder") {
    const auto ladder = parse_ladder(a.ladder);
    ordered_json out = ordered_json::array();
    std::string text = "n,mean,stderr,scaled_mean,scaled_stderr,reference\n";
    for (auto n : ladder) {
      ExperimentConfig step = c;
      step.n_points = n;
      step.validate();
      const auto r = montecarlo::run(step);
      // Moments are scaled by N^{1-p/d}, as on convergence plots.
      const double scale = c.statistic.kind == StatisticKind::kMoment
                               ? std::pow(static_cast<double>(n), 1.0 - c.statistic.p / c.d)
                               : 1.0;
      const auto refs = references_for(step);
      const double ref = refs.empty() ? std::nan("") : refs.front().value / scale;
      out.push_back({{"n", n},
                     {"mean", r.estimate.mean},
                     {"stderr", r.estimate.std_error},
                     {"scaled_mean", r.estimate.mean / scale},
                     {"scaled_stderr", r.estimate.std_error / scale},
                     {"reference", ref}});
      text += std::to_string(n) + "," + io::format_double(r.estimate.mean) + "," +
              io::format_double(r.estimate.std_error) + "," + io::format_double(r.estimate.mean / scale) +
              "," + io::format_double(r.estimate.std_error / scale) + "," + io::format_double(ref) + "\n";
    }
    j["rows"] = out;
    if (c.statistic.kind == StatisticKind::kMoment) {
      j["limit"] = {{"value", constants::c_moment(Dimension(c.d), c.statistic.p)}, {"source", "c_{d,p}"}};
    }
    if (!a.csv.empty()) io::write_atomic(a.csv, text);
  } else {
    throw UsageError("unknown mode '" + a.mode + "' (expected run, gaps, bounds, trend, ladder)");
  }
  emit(dump(j), a.out);
  return 0;
}

// key = value lines; flags given on the command line win.
std::vector<std::string> merge_config_file(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  auto given = [&](const std::string& key) {
    for (const auto& a : args) {
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "config") throw UsageError("config files cannot include other config files");
    if (given(key)) continue;
    if (key == "emit-curve") {
      if (value == "true" || value == "1") extra.push_back("--emit-curve");
      continue;
    }
    extra.push_back("--" + key);
    extra.push_back(value);
  }
  // Config values go right after the subcommand name.
  auto pos = std::find(args.begin(), args.end(), "experiment");
  args.insert(pos + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random point configurations on S^d: hulls, hole radii, separation, oracles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SPHCOV_BUILD_ID);

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Uniform i.i.d. points on S^d");
  sample_cmd->add_option("--d", sample.d, "sphere dimension")->required();
  sample_cmd->add_option("--n", sample.n, "number of points")->required();
  sample_cmd->add_option("--seed", sample.seed, "master seed")->required();
  sample_cmd->add_option("--trial", sample.trial, "trial index")->default_val(0);
  sample_cmd->add_option("--attempt", sample.attempt, "replacement draw index")->default_val(0);
  sample_cmd->add_option("--out", sample.out, "output path (stdout if omitted)");

  std::size_t fib_n = 0;
  std::string fib_out;
  auto* fib_cmd = app.add_subcommand("fibonacci", "Spherical Fibonacci points on S^2");
  fib_cmd->add_option("--n", fib_n, "number of points")->required();
  fib_cmd->add_option("--out", fib_out, "output path (stdout if omitted)");

  std::string hull_in, hull_out;
  auto* hull_cmd = app.add_subcommand("hull", "Facet table of the convex hull");
  hull_cmd->add_option("--in", hull_in, "point file")->required();
  hull_cmd->add_option("--out", hull_out, "facet CSV path (stdout if omitted)");

  std::string met_in, met_stats = "holes,sep", met_format = "json", met_out;
  auto* met_cmd = app.add_subcommand("metrics", "Statistics of one point set");
  met_cmd->add_option("--in", met_in, "point file")->required();
  met_cmd->add_option("--stats", met_stats, "comma list of holes, sep, angles, gaps");
  met_cmd->add_option("--format", met_format)->check(CLI::IsMember({"json"}));
  met_cmd->add_option("--out", met_out, "output path (stdout if omitted)");

  int pred_d = 2;
  double pred_p = 1.0;
  long long pred_n = 0;
  std::string pred_method = "quadrature", pred_out;
  auto* pred_cmd = app.add_subcommand("predict", "Predicted E[sum rho_k^p]");
  pred_cmd->add_option("--d", pred_d)->required();
  pred_cmd->add_option("--p", pred_p)->required();
  pred_cmd->add_option("--n", pred_n)->required();
  pred_cmd->add_option("--method", pred_method)
      ->check(CLI::IsMember({"quadrature", "asymptotic", "exact-d2"}));
  pred_cmd->add_option("--out", pred_out);

  int const_d = 2;
  std::vector<double> const_p;
  std::string const_format = "text", const_out;
  auto* const_cmd = app.add_subcommand("constants", "Closed-form constants of S^d");
  const_cmd->add_option("--d", const_d)->required();
  const_cmd->add_option("--p", const_p, "moment orders for E_{d,p}, c_{d,p}")->delimiter(',');
  const_cmd->add_option("--format", const_format)->check(CLI::IsMember({"json", "csv", "text"}));
  const_cmd->add_option("--out", const_out);

  ExperimentArgs exp;
  std::string exp_config_path;
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo experiment");
  exp_cmd->add_option("--config", exp_config_path, "key = value file; command-line flags override");
  exp_cmd->add_option("--mode", exp.mode, "run, gaps, bounds, trend or ladder")
      ->check(CLI::IsMember({"run", "gaps", "bounds", "trend", "ladder"}));
  exp_cmd->add_option("--d", exp.config.d)->default_val(2);
  exp_cmd->add_option("--n", exp.config.n_points)->default_val(100);
  exp_cmd->add_option("--trials", exp.config.n_trials)->default_val(1);
  exp_cmd->add_option("--seed", exp.config.master_seed)->default_val(0);
  exp_cmd->add_option("--stat", exp.stat,
                      "moment:P, facet_count, covering, covering_rho, separation, scaled_separation, "
                      "gap:K, weighted_rho2, cap_area_sum, scaled_hole_radii, angle_dist");
  exp_cmd->add_option("--workers", exp.config.workers)->default_val(1);
  exp_cmd->add_option("--ladder", exp.ladder, "comma list of n (trend and ladder modes)");
  exp_cmd->add_option("--grid", exp.grid, "eps grid size (bounds mode)")->default_val(12);
  exp_cmd->add_option("--out", exp.out, "JSON summary path (stdout if omitted)");
  exp_cmd->add_option("--csv", exp.csv, "per-trial CSV path");
  exp_cmd->add_flag("--emit-curve", exp.emit_curve, "embed the analytic curve table");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = merge_config_file(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*sample_cmd) return cmd_sample(sample);
    if (*fib_cmd) return cmd_fibonacci(fib_n, fib_out);
    if (*hull_cmd) return cmd_hull(hull_in, hull_out);
    if (*met_cmd) return cmd_metrics(met_in, met_stats, met_out);
    if (*pred_cmd) return cmd_predict(pred_d, pred_p, pred_n, pred_method, pred_out);
    if (*const_cmd) return cmd_constants(const_d, const_p, const_format, const_out);
    if (*exp_cmd) return cmd_experiment(exp);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::string kind = "runtime";
    if (dynamic_cast<const DomainError*>(&e)) kind = "domain";
    if (dynamic_cast<const DegenerateError*>(&e)) kind = "degenerate";
    if (dynamic_cast<const ParseError*>(&e)) kind = "parse";
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::out_of_range*>(&e)) {
      kind = "domain";
    }
    ordered_json err;
    err["format_version"] = kFormatVersion;
    err["error"] = {{"kind", kind}, {"message", e.what()}};
    std::cout << dump(err);
    return kExitNumeric;
  }
  return kExitUsage;
}
