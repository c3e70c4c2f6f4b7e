#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "sphcov/constants.hpp"
#include "sphcov/errors.hpp"
#include "sphcov/hull.hpp"
#include "sphcov/metrics.hpp"
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

Configuration equally_spaced(int n, double phase = 0.3) {
  std::vector<double> c;
  for (int i = 0; i < n; ++i) {
    c.push_back(std::cos(phase + 2 * kPi * i / n));
    c.push_back(std::sin(phase + 2 * kPi * i / n));
  }
  return make(1, c);
}

// Covering radius oracle on S^2: the largest nearest-point distance over a
// Fibonacci probe mesh, polished by a shrinking pattern search around the
// best probes.
double probe_mesh_covering_rho(const Configuration& c, std::size_t probes = 20000) {
  auto nearest = [&](const std::array<double, 3>& q) {
    double best = 1e300;
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto p = c.point(i);
      const double d2 = (p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) + (p[2] - q[2]) * (p[2] - q[2]);
      best = std::min(best, d2);
    }
    return std::sqrt(best);
  };
  const auto mesh = sampling::fibonacci_s2(probes);
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t m = 0; m < probes; ++m) {
    auto p = mesh.point(m);
    scored.push_back({nearest({p[0], p[1], p[2]}), m});
  }
  std::partial_sort(scored.begin(), scored.begin() + 16, scored.end(), std::greater<>());
  double result = 0;
  for (int s = 0; s < 16; ++s) {
    auto p = mesh.point(scored[s].second);
    std::array<double, 3> q = {p[0], p[1], p[2]};
    double value = scored[s].first;
    double step = 0.02;
    while (step > 1e-8) {
      bool improved = false;
      // Tangent basis at q.
      std::array<double, 3> a = std::abs(q[0]) < 0.9 ? std::array<double, 3>{1, 0, 0} : std::array<double, 3>{0, 1, 0};
      const double dot = a[0] * q[0] + a[1] * q[1] + a[2] * q[2];
      for (int k = 0; k < 3; ++k) a[k] -= dot * q[k];
      const double an = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
      for (double& x : a) x /= an;
      const std::array<double, 3> b = {q[1] * a[2] - q[2] * a[1], q[2] * a[0] - q[0] * a[2], q[0] * a[1] - q[1] * a[0]};
      for (int dir = 0; dir < 8; ++dir) {
        const double ang = dir * kPi / 4;
        std::array<double, 3> t;
        for (int k = 0; k < 3; ++k) t[k] = q[k] + step * (std::cos(ang) * a[k] + std::sin(ang) * b[k]);
        const double tn = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
        for (double& x : t) x /= tn;
        const double v = nearest(t);
        if (v > value) {
          value = v;
          q = t;
          improved = true;
        }
      }
      if (!improved) step /= 2;
    }
    // The maximum sits at a Voronoi vertex; snap to the circumcenter of the
    // three nearest sites and keep it only if it is a genuine improvement.
    std::vector<std::pair<double, std::size_t>> near;
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto p = c.point(i);
      near.push_back({(p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) + (p[2] - q[2]) * (p[2] - q[2]), i});
    }
    std::partial_sort(near.begin(), near.begin() + 3, near.end());
    auto x = c.point(near[0].second), y = c.point(near[1].second), z = c.point(near[2].second);
    const std::array<double, 3> u = {y[0] - x[0], y[1] - x[1], y[2] - x[2]};
    const std::array<double, 3> w = {z[0] - x[0], z[1] - x[1], z[2] - x[2]};
    std::array<double, 3> cc = {u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
    const double cn = std::sqrt(cc[0] * cc[0] + cc[1] * cc[1] + cc[2] * cc[2]);
    if (cn > 0) {
      const double sgn = cc[0] * q[0] + cc[1] * q[1] + cc[2] * q[2] < 0 ? -1.0 : 1.0;
      for (double& v : cc) v *= sgn / cn;
      value = std::max(value, nearest(cc));
    }
    result = std::max(result, value);
  }
  return result;
}

}  // namespace

TEST_CASE("tetrahedron holes") {
  const auto c = tetrahedron();
  const auto h = hull::convex_hull(c);
  const auto holes = metrics::hole_radii(c, h);
  REQUIRE(holes.rho.size() == 4);
  for (double r : holes.rho) CHECK(std::abs(r - 2 / std::sqrt(3.0)) < 1e-12);
  CHECK(std::abs(holes.covering_alpha - std::acos(1.0 / 3)) < 1e-12);
  CHECK(std::abs(metrics::moment_sum(holes, 2) - 16.0 / 3) < 1e-12);
  CHECK(metrics::moment_sum(holes, 0) == 4);
  const auto w = metrics::weighted_facet_stat(c, h, holes);
  CHECK(std::abs(w.weighted_rho2 - 4.0 / 3) < 1e-12);
  CHECK(std::abs(w.identity_residual) < 1e-12);
  CHECK(std::abs(holes.cap_area_sum - metrics::moment_sum(holes, 2) / 4) < 1e-12);
  CHECK_THROWS_AS(metrics::moment_sum(holes, -1), DomainError);
}

TEST_CASE("equally spaced circle") {
  for (int n : {3, 8, 101}) {
    const auto c = equally_spaced(n);
    const auto h = hull::convex_hull(c);
    const auto holes = metrics::hole_radii(c, h);
    for (double r : holes.rho) CHECK(std::abs(r - 2 * std::sin(kPi / (2 * n))) < 1e-12);
    const auto gaps = metrics::circle_gaps(c);
    for (double g : gaps) CHECK(std::abs(g - 2 * kPi / n) < 1e-12);
    CHECK(std::abs(metrics::separation(c).theta_min - 2 * kPi / n) < 1e-12);
  }
}

TEST_CASE("hole invariants on random configurations") {
  for (int d = 1; d <= 4; ++d) {
    for (std::uint64_t t = 0; t < 5; ++t) {
      const auto c = sampling::sample_uniform(Dimension(d), 150, SeedSpec{21, t});
      const auto h = hull::convex_hull(c);
      const auto holes = metrics::hole_radii(c, h);
      double mx = 0;
      for (std::size_t k = 0; k < holes.rho.size(); ++k) {
        CHECK(std::abs(holes.rho[k] - 2 * std::sin(holes.alpha[k] / 2)) < 1e-12);
        CHECK(holes.rho[k] >= 0);
        CHECK(holes.rho[k] <= 2);
        mx = std::max(mx, holes.rho[k]);
      }
      CHECK(holes.covering_rho == mx);
      CHECK(holes.covering_alpha > 0);
      CHECK(metrics::separation(c).theta_min > 0);
      // Large-p moments approach the maximum.
      CHECK(std::abs(std::pow(metrics::moment_sum(holes, 64), 1.0 / 64) / holes.covering_rho - 1) < 0.05);
      if (d == 2) {
        CHECK(std::abs(holes.cap_area_sum - metrics::moment_sum(holes, 2) / 4) < 1e-12);
      }
    }
  }
}

TEST_CASE("covering radius matches the probe-mesh oracle") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const std::size_t n = 20 + 4 * t;
    const auto c = sampling::sample_uniform(Dimension(2), n, SeedSpec{404, t});
    const auto holes = metrics::hole_radii(c, hull::convex_hull(c));
    const double probe = probe_mesh_covering_rho(c);
    CAPTURE(t);
    CHECK(probe <= holes.covering_rho + 1e-9);
    CHECK(std::abs(probe - holes.covering_rho) < 1e-3);
  }
}

TEST_CASE("origin outside: the large hole is covered") {
  // Points confined to a cap; the complementary hole exceeds a hemisphere.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  std::vector<double> coords;
  for (int i = 0; i < 60; ++i) {
    double x = u(rng), y = u(rng), z = 1;
    const double r = std::sqrt(x * x + y * y + z * z);
    coords.insert(coords.end(), {x / r, y / r, z / r});
  }
  const auto c = make(2, coords);
  const auto h = hull::convex_hull(c);
  REQUIRE_FALSE(h.origin_inside);
  const auto holes = metrics::hole_radii(c, h);
  CHECK(holes.covering_rho > std::sqrt(2.0));
  CHECK(holes.covering_alpha > kPi / 2);
  // The south pole is farthest from every point; its distance is the true
  // covering radius only if it is the deepest point, which holds here.
  double nearest = 1e300;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto p = c.point(i);
    nearest = std::min(nearest, std::sqrt(p[0] * p[0] + p[1] * p[1] + (p[2] + 1) * (p[2] + 1)));
  }
  CHECK(holes.covering_rho >= nearest - 1e-12);
  CHECK(std::abs(probe_mesh_covering_rho(c) - holes.covering_rho) < 1e-3);
  CHECK_THROWS_AS(metrics::weighted_facet_stat(c, h, holes), DomainError);
}

TEST_CASE("weighted facet identity") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto c = sampling::sample_uniform(Dimension(2), 200, SeedSpec{55, t});
    const auto h = hull::convex_hull(c);
    const auto w = metrics::weighted_facet_stat(c, h, metrics::hole_radii(c, h));
    CHECK(std::abs(w.identity_residual) < 1e-9);
  }
  for (int d : {3, 4}) {
    const auto c = sampling::sample_uniform(Dimension(d), 300, SeedSpec{56, 0});
    const auto h = hull::convex_hull(c);
    const auto w = metrics::weighted_facet_stat(c, h, metrics::hole_radii(c, h));
    CHECK(std::abs(w.identity_residual) < 1e-9);
  }
}

TEST_CASE("separation") {
  const auto anti = make(2, {0, 0, 1, 0, 0, -1});
  const auto s = metrics::separation(anti);
  CHECK(std::abs(s.theta_min - kPi) < 1e-15);
  CHECK(std::abs(s.euclid_min - 2) < 1e-15);
  for (int d : {2, 3}) {
    for (std::size_t n : {500, 3000}) {
      const auto c = sampling::sample_uniform(Dimension(d), n, SeedSpec{17, n});
      const auto g = metrics::separation_grid(c);
      const auto b = metrics::separation_brute_force(c);
      CHECK(g.theta_min == b.theta_min);
      CHECK(g.euclid_min == b.euclid_min);
      CHECK(g.argmin_pair == b.argmin_pair);
      CHECK(std::abs(g.euclid_min - 2 * std::sin(g.theta_min / 2)) < 1e-12);
    }
  }
  // Exact ties resolve to the same pair on both paths.
  const auto ring = equally_spaced(300);
  std::vector<double> lifted;
  for (std::size_t i = 0; i < ring.size(); ++i) lifted.insert(lifted.end(), {ring.point(i)[0], ring.point(i)[1], 0.0});
  const auto flat = make(2, lifted);
  CHECK(metrics::separation_grid(flat).argmin_pair == metrics::separation_brute_force(flat).argmin_pair);
  CHECK_THROWS_AS(metrics::separation(make(2, {1, 0, 0, 0, 1, 0, 1, 0, 0})), DegenerateError);
}

TEST_CASE("pairwise angles") {
  const auto anti = make(2, {0, 0, 1, 0, 0, -1});
  const auto a = metrics::pairwise_angle_distribution(anti);
  REQUIRE(a.count() == 1);
  CHECK(std::abs(a.samples()[0] - kPi) < 1e-15);
  for (int d = 1; d <= 4; ++d) {
    std::vector<double> coords;
    const int dim = d + 1;
    for (int sign : {1, -1}) {
      for (int k = 0; k < dim; ++k) {
        for (int j = 0; j < dim; ++j) coords.push_back(j == k ? sign : 0.0);
      }
    }
    const auto frame = metrics::pairwise_angle_distribution(make(d, coords));
    for (double t : frame.samples()) {
      CHECK((std::abs(t - kPi / 2) < 1e-15 || std::abs(t - kPi) < 1e-15));
    }
  }
}

TEST_CASE("circle gaps") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto c = sampling::sample_uniform(Dimension(1), 40, SeedSpec{61, t});
    const auto gaps = metrics::circle_gaps(c);
    CHECK(std::is_sorted(gaps.rbegin(), gaps.rend()));
    CHECK(std::abs(std::accumulate(gaps.begin(), gaps.end(), 0.0) - 2 * kPi) < 1e-10);
    const auto holes = metrics::hole_radii(c, hull::convex_hull(c));
    CHECK(std::abs(gaps.front() / 2 - holes.covering_alpha) < 1e-10);
    CHECK(std::abs(gaps.back() - metrics::separation(c).theta_min) < 1e-10);
    CHECK(holes.covering_alpha >= metrics::separation(c).theta_min / 2);
  }
  CHECK_THROWS_AS(metrics::circle_gaps(tetrahedron()), DomainError);
}

TEST_CASE("summaries do not depend on point order") {
  const auto c = sampling::sample_uniform(Dimension(2), 300, SeedSpec{71, 0});
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(3));
  const auto p = c.permuted(order);
  const auto h1 = metrics::hole_radii(c, hull::convex_hull(c));
  const auto h2 = metrics::hole_radii(p, hull::convex_hull(p));
  CHECK(h1.covering_rho == doctest::Approx(h2.covering_rho).epsilon(1e-13));
  CHECK(metrics::moment_sum(h1, 2) == doctest::Approx(metrics::moment_sum(h2, 2)).epsilon(1e-13));
  CHECK(h1.cap_area_sum == doctest::Approx(h2.cap_area_sum).epsilon(1e-13));
  CHECK(metrics::separation(c).theta_min == metrics::separation(p).theta_min);
}
