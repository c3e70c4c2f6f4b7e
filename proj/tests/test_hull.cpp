#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "sphcov/errors.hpp"
#include "sphcov/hull.hpp"
#include "sphcov/sampling.hpp"
#include "sphcov/specfun.hpp"

using namespace sphcov;
using specfun::kPi;

namespace {

Configuration make(int d, std::vector<double> coords) {
  return Configuration(Dimension(d), std::move(coords), Provenance{ProvenanceKind::kExternal, {}, 0, "test"});
}

Configuration tetrahedron() {
  const double s = 1 / std::sqrt(3.0);
  return make(2, {s, s, s, s, -s, -s, -s, s, -s, -s, -s, s});
}

Configuration circle_points(const std::vector<double>& angles) {
  std::vector<double> c;
  for (double a : angles) {
    c.push_back(std::cos(a));
    c.push_back(std::sin(a));
  }
  return make(1, c);
}

}  // namespace

TEST_CASE("regular tetrahedron") {
  const auto c = tetrahedron();
  const auto h = hull::convex_hull(c);
  CHECK(h.facet_count == 4);
  CHECK(h.vertex_count == 4);
  CHECK(h.origin_inside);
  REQUIRE(h.euler_check.has_value());
  CHECK(*h.euler_check);
  for (const auto& f : h.facets) {
    CHECK(std::abs(f.offset_a - 1.0 / 3) < 1e-12);
    CHECK(std::abs(f.area - std::sqrt(3.0) / 4 * 8 / 3) < 1e-12);
    CHECK(f.vertex_indices.size() == 3);
    CHECK(std::is_sorted(f.vertex_indices.begin(), f.vertex_indices.end()));
    double len = 0;
    for (double x : f.unit_normal) len += x * x;
    CHECK(std::abs(len - 1) < 1e-14);
  }
  const double v = 8 / (9 * std::sqrt(3.0));
  CHECK(std::abs(h.volume - v) < 1e-12);
  CHECK(std::abs(hull::hull_volume_signed(c, h) - v) < 1e-12);
  CHECK(std::abs(hull::hull_volume_decomposed(c, h) - v) < 1e-12);
}

TEST_CASE("facet_area") {
  const auto c = make(2, {1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0});
  const std::size_t tri[] = {0, 1, 2};
  CHECK(std::abs(hull::facet_area(c, tri) - std::sqrt(3.0) / 2) < 1e-15);
  // Coincident points span nothing.
  const std::size_t flat[] = {0, 1, 3};
  CHECK(hull::facet_area(c, flat) < 1e-12);
  const std::size_t rep[] = {0, 0, 1};
  CHECK_THROWS_AS(hull::facet_area(c, rep), DomainError);
  const std::size_t few[] = {0, 1};
  CHECK_THROWS_AS(hull::facet_area(c, few), DomainError);
  const std::size_t out[] = {0, 1, 9};
  CHECK_THROWS_AS(hull::facet_area(c, out), DomainError);
}

TEST_CASE("circle hulls") {
  SUBCASE("square") {
    const auto c = circle_points({0, kPi / 2, kPi, 3 * kPi / 2});
    const auto h = hull::convex_hull(c);
    CHECK(h.facet_count == 4);
    CHECK(std::abs(h.volume - 2) < 1e-14);
    CHECK(std::abs(hull::hull_volume_decomposed(c, h) - 2) < 1e-14);
  }
  SUBCASE("random points: one edge per angular neighbor pair") {
    for (std::uint64_t t = 0; t < 20; ++t) {
      const auto c = sampling::sample_uniform(Dimension(1), 57, SeedSpec{3, t});
      const auto h = hull::convex_hull(c);
      CHECK(h.facet_count == 57);
      std::vector<std::size_t> order(57);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        return std::atan2(c.point(a)[1], c.point(a)[0]) < std::atan2(c.point(b)[1], c.point(b)[0]);
      });
      std::vector<std::vector<std::size_t>> expected;
      for (std::size_t i = 0; i < 57; ++i) {
        auto a = order[i], b = order[(i + 1) % 57];
        expected.push_back({std::min(a, b), std::max(a, b)});
      }
      std::sort(expected.begin(), expected.end());
      std::vector<std::vector<std::size_t>> got;
      for (const auto& f : h.facets) {
        auto v = f.vertex_indices;
        std::sort(v.begin(), v.end());
        got.push_back(v);
      }
      std::sort(got.begin(), got.end());
      CHECK(got == expected);
      CHECK(hull::max_halfspace_violation(c, h) <= 1e-10);
    }
  }
  SUBCASE("points in a half circle leave the origin outside") {
    const auto c = circle_points({0.1, 0.5, 1.0, 2.0});
    const auto h = hull::convex_hull(c);
    CHECK(h.facet_count == 4);
    CHECK_FALSE(h.origin_inside);
    CHECK(std::abs(h.volume - hull::hull_volume_decomposed(c, h)) < 1e-14);
  }
}

TEST_CASE("random hulls satisfy the structural checks") {
  struct Case {
    int d;
    std::size_t n;
    int trials;
  };
  for (Case k : {Case{2, 10, 30}, Case{2, 1000, 20}, Case{3, 300, 10}, Case{4, 200, 5}, Case{5, 100, 3}}) {
    for (int t = 0; t < k.trials; ++t) {
      const auto c = sampling::sample_uniform(Dimension(k.d), k.n, SeedSpec{77, std::uint64_t(t)});
      const auto h = hull::convex_hull(c);
      CAPTURE(k.d);
      CAPTURE(k.n);
      CAPTURE(t);
      if (k.d == 2) {
        CHECK(h.facet_count == 2 * k.n - 4);
        CHECK(h.euler_check.value());
      } else {
        CHECK_FALSE(h.euler_check.has_value());
      }
      CHECK(hull::covers_all_points(h));
      CHECK(h.vertex_count == k.n);
      CHECK(hull::max_halfspace_violation(c, h) <= 1e-10);
      const double vol = hull::hull_volume_decomposed(c, h);
      CHECK(std::abs(h.volume - vol) <= 1e-9 * vol);
      for (const auto& f : h.facets) {
        CHECK(f.area > 0);
        CHECK(f.offset_a <= 1);
        CHECK(f.offset_a >= -1);
      }
    }
  }
}

TEST_CASE("hull is independent of point order") {
  const auto c = sampling::sample_uniform(Dimension(3), 400, SeedSpec{5, 5});
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(1));
  const auto p = c.permuted(order);
  const auto h1 = hull::convex_hull(c);
  const auto h2 = hull::convex_hull(p);
  CHECK(h1.facet_count == h2.facet_count);
  CHECK(std::abs(h1.volume - h2.volume) < 1e-12);
  // Same facets once indices are mapped back.
  std::vector<std::vector<std::size_t>> a, b;
  for (const auto& f : h1.facets) a.push_back(f.vertex_indices);
  for (const auto& f : h2.facets) {
    std::vector<std::size_t> v;
    for (auto i : f.vertex_indices) v.push_back(order[i]);
    std::sort(v.begin(), v.end());
    b.push_back(v);
  }
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("polytope approaches the ball") {
  double prev_v = 0, prev_a = 0;
  for (std::size_t n : {50, 500, 5000}) {
    const auto c = sampling::sample_uniform(Dimension(2), n, SeedSpec{8, n});
    const auto h = hull::convex_hull(c);
    const double vr = h.volume / (4 * kPi / 3), ar = h.surface_area / (4 * kPi);
    CHECK(vr < 1);
    CHECK(ar < 1);
    CHECK(vr > prev_v);
    CHECK(ar > prev_a);
    prev_v = vr;
    prev_a = ar;
  }
  double prev = 0;
  for (std::size_t n : {100, 1000, 10000}) {
    const auto h = hull::convex_hull(sampling::sample_uniform(Dimension(2), n, SeedSpec{9, n}));
    CHECK(h.volume < 4 * kPi / 3);
    CHECK(h.volume > prev);
    prev = h.volume;
  }
}

TEST_CASE("origin outside the hull") {
  // All points in a small cap around the north pole.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::vector<double> coords;
  for (int i = 0; i < 40; ++i) {
    double x = u(rng), y = u(rng), z = 1;
    const double r = std::sqrt(x * x + y * y + z * z);
    coords.insert(coords.end(), {x / r, y / r, z / r});
  }
  const auto c = make(2, coords);
  const auto h = hull::convex_hull(c);
  CHECK_FALSE(h.origin_inside);
  CHECK(h.volume > 0);
  CHECK(std::abs(h.volume - hull::hull_volume_decomposed(c, h)) < 1e-9 * h.volume);
  CHECK(hull::max_halfspace_violation(c, h) <= 1e-10);
  int negative = 0;
  for (const auto& f : h.facets) negative += f.offset_a < 0;
  CHECK(negative >= 1);
}

TEST_CASE("degenerate and invalid input") {
  // The four equator points are coplanar.
  const double s = std::sqrt(0.5);
  const auto square = make(2, {1, 0, 0, 0, 1, 0, -1, 0, 0, 0, -1, 0, 0, s, s});
  try {
    hull::convex_hull(square);
    FAIL("expected DegenerateError");
  } catch (const DegenerateError& e) {
    CHECK(e.indices().size() >= 4);
  }
  CHECK_THROWS_AS(hull::convex_hull(make(2, {1, 0, 0, 0, 1, 0, 0, 0, 1})), DomainError);
  CHECK_THROWS_AS(hull::convex_hull(sampling::sample_uniform(Dimension(6), 20, SeedSpec{})), DomainError);
  // Duplicate points are never both hull vertices.
  CHECK_THROWS_AS(hull::convex_hull(make(2, {1, 0, 0, 0, 1, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 1, 0, 0})),
                  DegenerateError);
  CHECK_THROWS_AS(hull::convex_hull(circle_points({0.0, 1.0, 1.0, 3.0})), DegenerateError);
}

TEST_CASE("near-coplanar points inside the tolerance band are resolved") {
  // The middle point sits about 5e-13 beyond the chord of its neighbors.
  const auto c = circle_points({0.0, 1e-6, 2e-6, 2.0, 4.0});
  const auto h = hull::convex_hull(c);
  CHECK(h.facet_count == 5);
  CHECK(hull::max_halfspace_violation(c, h) <= 1e-10);
  // Same on S^2: a small cluster near the north pole among well-spread points.
  std::vector<double> xyz;
  auto push = [&](double theta, double phi) {
    xyz.insert(xyz.end(), {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
  };
  for (int k = 0; k < 3; ++k) push(2e-5, 2 * kPi * k / 3);
  push(0.0, 0.0);
  for (int k = 0; k < 6; ++k) push(1.7 + 0.2 * k, 2 * kPi * k / 6 + 0.1);
  const auto s = make(2, xyz);
  const auto hs = hull::convex_hull(s);
  CHECK(hs.facet_count == 2 * 10 - 4);
  CHECK(hs.euler_check.value_or(false));
}
