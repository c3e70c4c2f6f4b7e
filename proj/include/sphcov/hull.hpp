#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sphcov/sampling.hpp"

namespace sphcov {

inline constexpr int kMaxHullDimension = 5;
inline constexpr double kHullTolerance = 1e-10;

/// One simplicial facet of the hull. The supporting hyperplane is
/// {x : unit_normal . x = offset_a} with unit_normal pointing outward.
struct Facet {
  std::vector<std::size_t> vertex_indices;  // d+1 indices, ascending
  std::vector<double> unit_normal;          // d+1 components
  double offset_a = 0.0;
  double area = 0.0;                        // d-dimensional measure
};

struct HullResult {
  int d = 0;
  std::size_t point_count = 0;
  std::vector<Facet> facets;
  std::size_t facet_count = 0;
  std::size_t vertex_count = 0;
  bool origin_inside = false;
  double volume = 0.0;        // pyramid sum over facets, signed by offset
  double surface_area = 0.0;  // sum of facet areas
  std::optional<bool> euler_check;  // d = 2 only
};

namespace hull {

/// Convex hull of a configuration in R^{d+1}, d <= 5.
///
/// Randomized incremental construction with a bidirectional conflict graph.
/// Throws DegenerateError when d+2 points lie on a common hyperplane within
/// kHullTolerance, or when a point is not a hull vertex.
HullResult convex_hull(const Configuration& config);

/// d-volume of the simplex spanned by the given d+1 points (Gram determinant).
double facet_area(const Configuration& config, std::span<const std::size_t> vertex_indices);

/// (1/(d+1)) sum_k area_k offset_k.
double hull_volume_signed(const Configuration& config, const HullResult& hull);

/// Volume as a sum of simplices joining an interior point to each facet.
double hull_volume_decomposed(const Configuration& config, const HullResult& hull);

/// max over points and facets of (normal . x - offset); <= tol for a valid hull.
double max_halfspace_violation(const Configuration& config, const HullResult& hull);

/// Every point is a vertex of at least one facet.
bool covers_all_points(const HullResult& hull);

}  // namespace hull
}  // namespace sphcov
