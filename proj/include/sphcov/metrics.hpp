#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sphcov/empirical.hpp"
#include "sphcov/hull.hpp"
#include "sphcov/sampling.hpp"

namespace sphcov {

/// Per-facet hole geometry of one configuration.
struct HoleSummary {
  std::vector<double> rho;       // Euclidean hole radii, one per facet
  std::vector<double> alpha;     // geodesic radii, rho = 2 sin(alpha / 2)
  std::vector<double> cap_area;  // normalized cap areas sigma_d(C_rho)
  double covering_rho = 0.0;     // max rho
  double covering_alpha = 0.0;   // geodesic covering radius
  double cap_area_sum = 0.0;
  double weighted_rho2 = 0.0;    // sum (A_k / A_N) rho_k^2
};

struct SeparationSummary {
  double theta_min = 0.0;
  double euclid_min = 0.0;
  std::pair<std::size_t, std::size_t> argmin_pair{0, 0};
};

/// Terms of the volume/area decomposition of the weighted facet statistic.
struct WeightedFacetStat {
  double weighted_rho2 = 0.0;
  double one_minus_AN_over_A = 0.0;
  double one_minus_VN_over_V = 0.0;
  double cross_term = 0.0;  // 2 (1 - A_N/A)(1 - (d+1) V_N / A_N)
  double identity_residual = 0.0;
};

namespace metrics {

/// Hole radii from facet offsets, rho_k^2 = 2 - 2 a_k with signed a_k. A
/// facet with a_k < 0 (origin outside the hull) bounds a cap larger than a
/// hemisphere and gets rho_k^2 = 2 + 2 |a_k|.
HoleSummary hole_radii(const Configuration& config, const HullResult& hull);

/// sum_k rho_k^p; p = 0 gives the facet count.
double moment_sum(const HoleSummary& holes, double p);

/// Requires the origin inside the hull.
WeightedFacetStat weighted_facet_stat(const Configuration& config, const HullResult& hull,
                                      const HoleSummary& holes);

/// Minimum pairwise distance. Uses a cell grid for d = 2, 3 and N >= 256,
/// otherwise the all-pairs scan. Ties resolve to the lexicographically
/// smallest index pair, so both paths agree exactly.
SeparationSummary separation(const Configuration& config);
SeparationSummary separation_brute_force(const Configuration& config);
SeparationSummary separation_grid(const Configuration& config);

/// All N(N-1)/2 pairwise geodesic angles.
EmpiricalDistribution pairwise_angle_distribution(const Configuration& config);

/// d = 1 only: arc lengths between angularly consecutive points, descending.
std::vector<double> circle_gaps(const Configuration& config);

/// Geodesic angle for a chord of Euclidean length `chord`.
double chord_to_angle(double chord);

}  // namespace metrics
}  // namespace sphcov
