#include "sphcov/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <tuple>
#include <unordered_map>

#include "sphcov/constants.hpp"
#include "sphcov/errors.hpp"
#include "sphcov/specfun.hpp"

namespace sphcov::metrics {
namespace {

constexpr double kDuplicateDistance = 1e-14;

double squared_distance(const Configuration& config, std::size_t i, std::size_t j) {
  auto a = config.point(i);
  auto b = config.point(j);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

struct Best {
  double d2 = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  std::size_t j = 0;

  void offer(double cand, std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    if (std::tie(cand, a, b) < std::tie(d2, i, j)) {
      d2 = cand;
      i = a;
      j = b;
    }
  }
};

SeparationSummary finish(const Best& best) {
  const double e = std::sqrt(best.d2);
  if (e < kDuplicateDistance) {
    throw DegenerateError("separation: duplicate points", {best.i, best.j});
  }
  return {chord_to_angle(e), e, {best.i, best.j}};
}

double surface_area_sphere(int d) {
  const double half = 0.5 * (d + 1);
  return 2.0 * std::pow(specfun::kPi, half) / std::exp(specfun::ln_gamma(half));
}

}  // namespace

double chord_to_angle(double chord) { return 2.0 * std::asin(std::min(1.0, chord / 2.0)); }

HoleSummary hole_radii(const Configuration& config, const HullResult& hull) {
  const Dimension d = config.dimension();
  HoleSummary h;
  const std::size_t f = hull.facets.size();
  h.rho.resize(f);
  h.alpha.resize(f);
  h.cap_area.resize(f);
  for (std::size_t k = 0; k < f; ++k) {
    const double a = hull.facets[k].offset_a;
    const double rho = std::sqrt(std::clamp(2.0 - 2.0 * a, 0.0, 4.0));
    h.rho[k] = rho;
    h.alpha[k] = chord_to_angle(rho);
    h.cap_area[k] = constants::cap_area_euclid(d, rho);
    h.covering_rho = std::max(h.covering_rho, rho);
    h.cap_area_sum += h.cap_area[k];
    if (hull.surface_area > 0.0) {
      h.weighted_rho2 += hull.facets[k].area / hull.surface_area * rho * rho;
    }
  }
  h.covering_alpha = chord_to_angle(h.covering_rho);
  return h;
}

double moment_sum(const HoleSummary& holes, double p) {
  if (!(p >= 0.0)) throw DomainError("moment_sum: requires p >= 0");
  if (p == 0.0) return static_cast<double>(holes.rho.size());
  double s = 0.0;
  for (double r : holes.rho) s += std::pow(r, p);
  return s;
}

WeightedFacetStat weighted_facet_stat(const Configuration& config, const HullResult& hull,
                                      const HoleSummary& holes) {
  if (!hull.origin_inside) {
    throw DomainError("weighted_facet_stat: origin is outside the hull");
  }
  const int d = config.dimension().value();
  const double area_sphere = surface_area_sphere(d);
  const double vol_ball = area_sphere / (d + 1);
  WeightedFacetStat w;
  w.weighted_rho2 = holes.weighted_rho2;
  w.one_minus_AN_over_A = 1.0 - hull.surface_area / area_sphere;
  w.one_minus_VN_over_V = 1.0 - hull.volume / vol_ball;
  w.cross_term = 2.0 * w.one_minus_AN_over_A * (1.0 - (d + 1) * hull.volume / hull.surface_area);
  const double rhs = 2.0 * w.one_minus_VN_over_V - 2.0 * w.one_minus_AN_over_A + w.cross_term;
  w.identity_residual = w.weighted_rho2 - rhs;
  return w;
}

SeparationSummary separation_brute_force(const Configuration& config) {
  Best best;
  const std::size_t n = config.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) best.offer(squared_distance(config, i, j), i, j);
  }
  return finish(best);
}

SeparationSummary separation_grid(const Configuration& config) {
  const int d = config.dimension().value();
  const int dim = config.ambient();
  const std::size_t n = config.size();
  const int bits = 64 / dim;
  const double max_cells = std::ldexp(1.0, bits) - 4.0;
  // Cell edge starts near a few times the typical minimum distance and
  // doubles until some pair falls below it, which makes the result exact.
  double h = 3.0 * std::pow(static_cast<double>(n), -2.0 / d);
  h = std::max(h, 2.0 / max_cells);

  std::vector<std::uint64_t> keys(n);
  std::vector<std::array<std::int64_t, 4>> cells(n);
  std::vector<std::size_t> order(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      auto p = config.point(i);
      std::uint64_t key = 0;
      for (int k = 0; k < dim; ++k) {
        const auto c = static_cast<std::int64_t>(std::floor((p[k] + 1.0) / h)) + 1;
        cells[i][k] = c;
        key = (key << bits) | static_cast<std::uint64_t>(c);
      }
      keys[i] = key;
    }
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(keys[a], a) < std::tie(keys[b], b);
    });
    std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> buckets;
    buckets.reserve(n * 2);
    for (std::size_t s = 0; s < n;) {
      std::size_t e = s;
      while (e < n && keys[order[e]] == keys[order[s]]) ++e;
      buckets.emplace(keys[order[s]], std::make_pair(s, e));
      s = e;
    }

    int offsets = 1;
    for (int k = 0; k < dim; ++k) offsets *= 3;
    Best best;
    for (std::size_t i = 0; i < n; ++i) {
      for (int o = 0; o < offsets; ++o) {
        std::uint64_t key = 0;
        int rem = o;
        for (int k = 0; k < dim; ++k) {
          const std::int64_t c = cells[i][k] + (rem % 3) - 1;
          rem /= 3;
          key = (key << bits) | static_cast<std::uint64_t>(c);
        }
        auto it = buckets.find(key);
        if (it == buckets.end()) continue;
        for (std::size_t s = it->second.first; s < it->second.second; ++s) {
          const std::size_t j = order[s];
          if (j <= i) continue;
          best.offer(squared_distance(config, i, j), i, j);
        }
      }
    }
    if (best.d2 < h * h) return finish(best);
    if (h >= 4.0) return separation_brute_force(config);
    h *= 2.0;
  }
}

SeparationSummary separation(const Configuration& config) {
  const int d = config.dimension().value();
  if (config.size() >= 256 && (d == 2 || d == 3)) return separation_grid(config);
  return separation_brute_force(config);
}

EmpiricalDistribution pairwise_angle_distribution(const Configuration& config) {
  const std::size_t n = config.size();
  std::vector<double> angles;
  angles.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      angles.push_back(chord_to_angle(std::sqrt(squared_distance(config, i, j))));
    }
  }
  return EmpiricalDistribution(std::move(angles));
}

std::vector<double> circle_gaps(const Configuration& config) {
  if (config.dimension().value() != 1) throw DomainError("circle_gaps: requires d = 1");
  const std::size_t n = config.size();
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = config.point(i);
    theta[i] = std::atan2(p[1], p[0]);
  }
  std::sort(theta.begin(), theta.end());
  std::vector<double> gaps(n);
  for (std::size_t i = 0; i + 1 < n; ++i) gaps[i] = theta[i + 1] - theta[i];
  gaps[n - 1] = 2.0 * specfun::kPi - (theta[n - 1] - theta[0]);
  std::sort(gaps.begin(), gaps.end(), std::greater<>());
  return gaps;
}

}  // namespace sphcov::metrics
