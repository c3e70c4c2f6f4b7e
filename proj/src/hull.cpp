#include "sphcov/hull.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "sphcov/errors.hpp"

namespace sphcov::hull {
namespace {

constexpr int kMaxAmbient = kMaxHullDimension + 1;
using Vec = std::array<double, kMaxAmbient>;
using SmallMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxAmbient, kMaxAmbient>;

struct ConflictRef {
  int facet;
  std::uint32_t gen;
};

struct WorkFacet {
  std::array<int, kMaxAmbient> v{};
  std::array<int, kMaxAmbient> nb{};  // nb[i] is across the ridge opposite v[i]
  Vec normal{};
  double offset = 0.0;
  std::vector<int> conflicts;
  std::uint32_t gen = 0;
  int visible_mark = -1;
  bool alive = false;
};

struct RidgeEntry {
  std::array<int, kMaxAmbient - 1> key;
  int facet;
  int slot;
};

std::vector<std::size_t> as_indices(std::span<const int> v) {
  std::vector<std::size_t> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

class IncrementalHull {
 public:
  explicit IncrementalHull(const Configuration& config)
      : config_(config),
        dim_(config.ambient()),
        n_(static_cast<int>(config.size())),
        point_conflicts_(config.size()),
        compact_at_(config.size(), 16),
        seen_(config.size(), 0),
        done_(config.size(), false) {}

  void build() {
    std::vector<int> order(n_);
    std::iota(order.begin(), order.end(), 0);
    // Fixed shuffle: randomized insertion order, deterministic output.
    std::mt19937_64 rng(0x5eedf00dULL);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<int> simplex = initial_simplex(order);
    for (int idx : simplex) done_[idx] = true;
    for (int i = 0; i < n_; ++i) {
      if (done_[i]) continue;
      for (int f : simplex_facets_) add_if_conflict(f, i);
    }
    for (int p : order) {
      if (!done_[p]) insert(p);
    }
  }

  HullResult result() const {
    HullResult r;
    r.d = dim_ - 1;
    r.point_count = config_.size();
    for (const WorkFacet& f : facets_) {
      if (!f.alive) continue;
      Facet out;
      out.vertex_indices = as_indices(std::span<const int>(f.v.data(), dim_));
      out.unit_normal.assign(f.normal.begin(), f.normal.begin() + dim_);
      out.offset_a = f.offset;
      out.area = facet_area(config_, out.vertex_indices);
      r.facets.push_back(std::move(out));
    }
    std::sort(r.facets.begin(), r.facets.end(),
              [](const Facet& a, const Facet& b) { return a.vertex_indices < b.vertex_indices; });
    return r;
  }

 private:
  double coord(int point, int k) const {
    return config_.coords()[static_cast<std::size_t>(point) * dim_ + k];
  }

  double distance(const WorkFacet& f, int point) const {
    double s = -f.offset;
    for (int k = 0; k < dim_; ++k) s += f.normal[k] * coord(point, k);
    return s;
  }

  // Orientation of `point` against the facet plane, relative to interior_:
  // +1 beyond, -1 inside, 0 undecidable. Distances within the tolerance band
  // are rechecked with a long double determinant and a forward error bound,
  // because small facets make near-zero distances common in large samples.
  int side(const WorkFacet& f, int point) const {
    const double dist = distance(f, point);
    if (dist > kHullTolerance) return 1;
    if (dist < -kHullTolerance) return -1;
    const Orientation q = orientation(f, [&](int k) { return static_cast<long double>(coord(point, k)); });
    const Orientation ref = orientation(f, [&](int k) { return static_cast<long double>(interior_[k]); });
    if (q.det == 0.0L || q.abs_det <= q.bound) return 0;
    return (q.det > 0.0L) == (ref.det > 0.0L) ? -1 : 1;
  }

  struct Orientation {
    long double det = 0.0L;
    long double abs_det = 0.0L;
    long double bound = 0.0L;
  };

  template <class Point>
  Orientation orientation(const WorkFacet& f, Point x) const {
    using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxAmbient, kMaxAmbient>;
    Mat m(dim_, dim_);
    long double hadamard = 1.0L;
    for (int i = 0; i < dim_; ++i) {
      long double norm2 = 0.0L;
      for (int k = 0; k < dim_; ++k) {
        const long double base = coord(f.v[0], k);
        const long double v = (i + 1 < dim_ ? static_cast<long double>(coord(f.v[i + 1], k)) : x(k)) - base;
        m(i, k) = v;
        norm2 += v * v;
      }
      hadamard *= std::sqrt(norm2);
    }
    Orientation o;
    o.det = m.partialPivLu().determinant();
    o.abs_det = std::fabs(o.det);
    // Rounding of the differences plus elimination, with a generous constant.
    o.bound = 64.0L * dim_ * dim_ * std::numeric_limits<long double>::epsilon() * hadamard;
    return o;
  }

  [[noreturn]] void degenerate(const std::string& what, std::span<const int> verts, int extra) const {
    std::vector<std::size_t> idx(verts.begin(), verts.end());
    if (extra >= 0) idx.push_back(static_cast<std::size_t>(extra));
    std::sort(idx.begin(), idx.end());
    throw DegenerateError("convex_hull: " + what, std::move(idx));
  }

  // Hyperplane through the facet vertices, oriented away from interior_.
  void fit_plane(WorkFacet& f) const {
    SmallMat edges(dim_ - 1, dim_);
    for (int i = 1; i < dim_; ++i) {
      for (int k = 0; k < dim_; ++k) edges(i - 1, k) = coord(f.v[i], k) - coord(f.v[0], k);
    }
    SmallMat minor(dim_ - 1, dim_ - 1);
    double len2 = 0.0;
    for (int j = 0; j < dim_; ++j) {
      for (int c = 0, cc = 0; c < dim_; ++c) {
        if (c == j) continue;
        minor.col(cc++) = edges.col(c);
      }
      const double cof = ((j % 2) ? -1.0 : 1.0) * minor.determinant();
      f.normal[j] = cof;
      len2 += cof * cof;
    }
    const double len = std::sqrt(len2);
    if (!(len > 1e-300)) {
      degenerate("facet vertices are affinely dependent", std::span<const int>(f.v.data(), dim_), -1);
    }
    double off = 0.0;
    for (int k = 0; k < dim_; ++k) f.normal[k] /= len;
    for (int i = 0; i < dim_; ++i) {
      for (int k = 0; k < dim_; ++k) off += f.normal[k] * coord(f.v[i], k);
    }
    off /= dim_;
    double side = -off;
    for (int k = 0; k < dim_; ++k) side += f.normal[k] * interior_[k];
    if (side > 0.0) {
      for (int k = 0; k < dim_; ++k) f.normal[k] = -f.normal[k];
      off = -off;
    }
    f.offset = off;
  }

  int allocate_facet() {
    if (!free_.empty()) {
      int id = free_.back();
      free_.pop_back();
      return id;
    }
    facets_.emplace_back();
    return static_cast<int>(facets_.size()) - 1;
  }

  void push_conflict(int f, int q) {
    facets_[f].conflicts.push_back(q);
    auto& refs = point_conflicts_[q];
    refs.push_back({f, facets_[f].gen});
    if (refs.size() >= compact_at_[q]) {
      std::erase_if(refs, [&](const ConflictRef& r) {
        return !facets_[r.facet].alive || facets_[r.facet].gen != r.gen;
      });
      compact_at_[q] = std::max<std::size_t>(16, 2 * refs.size());
    }
  }

  void add_if_conflict(int f, int q) {
    const int s = side(facets_[f], q);
    if (s > 0) {
      push_conflict(f, q);
    } else if (s == 0) {
      degenerate("point lies on a facet hyperplane", std::span<const int>(facets_[f].v.data(), dim_), q);
    }
  }

  std::vector<int> initial_simplex(const std::vector<int>& order) {
    std::vector<int> chosen{order[0]};
    std::vector<Vec> basis;
    for (std::size_t t = 1; t < order.size() && static_cast<int>(chosen.size()) < dim_ + 1; ++t) {
      Vec r{};
      for (int k = 0; k < dim_; ++k) r[k] = coord(order[t], k) - coord(order[0], k);
      for (const Vec& b : basis) {
        double dot = 0.0;
        for (int k = 0; k < dim_; ++k) dot += r[k] * b[k];
        for (int k = 0; k < dim_; ++k) r[k] -= dot * b[k];
      }
      double len = 0.0;
      for (int k = 0; k < dim_; ++k) len += r[k] * r[k];
      len = std::sqrt(len);
      if (len > 1e-6) {
        for (int k = 0; k < dim_; ++k) r[k] /= len;
        basis.push_back(r);
        chosen.push_back(order[t]);
      }
    }
    if (static_cast<int>(chosen.size()) < dim_ + 1) {
      degenerate("points span a lower-dimensional affine subspace", chosen, -1);
    }
    interior_.fill(0.0);
    for (int idx : chosen) {
      for (int k = 0; k < dim_; ++k) interior_[k] += coord(idx, k) / (dim_ + 1);
    }
    // Facet i omits chosen[i]; its neighbor across the ridge opposite vertex
    // chosen[m] is facet m.
    for (int i = 0; i <= dim_; ++i) {
      const int id = allocate_facet();
      WorkFacet& f = facets_[id];
      f.alive = true;
      for (int m = 0, slot = 0; m <= dim_; ++m) {
        if (m == i) continue;
        f.v[slot] = chosen[m];
        f.nb[slot] = m;  // facet ids 0..dim_ in creation order
        ++slot;
      }
      fit_plane(f);
      simplex_facets_.push_back(id);
    }
    return chosen;
  }

  void insert(int p) {
    visible_.clear();
    for (const ConflictRef& ref : point_conflicts_[p]) {
      WorkFacet& f = facets_[ref.facet];
      if (f.alive && f.gen == ref.gen && f.visible_mark != p) {
        f.visible_mark = p;
        visible_.push_back(ref.facet);
      }
    }
    if (visible_.empty()) {
      degenerate("point is not a vertex of the hull", {}, p);
    }

    ridges_.clear();
    created_.clear();
    for (int fid : visible_) {
      for (int i = 0; i < dim_; ++i) {
        const int gid = facets_[fid].nb[i];
        if (facets_[gid].visible_mark == p) continue;
        if (side(facets_[gid], p) >= 0) {
          degenerate("point is coplanar with a hull facet",
                     std::span<const int>(facets_[gid].v.data(), dim_), p);
        }
        const int hid = allocate_facet();
        WorkFacet& h = facets_[hid];
        const WorkFacet& f = facets_[fid];
        h.v = f.v;
        h.v[i] = p;
        h.nb.fill(-1);
        h.nb[i] = gid;
        h.alive = true;
        h.visible_mark = -1;
        h.conflicts.clear();
        fit_plane(h);
        for (int s = 0; s < dim_; ++s) {
          if (facets_[gid].nb[s] == fid) facets_[gid].nb[s] = hid;
        }
        for (int k = 0; k < dim_; ++k) {
          if (k == i) continue;
          RidgeEntry e{};
          e.key.fill(-1);
          for (int s = 0, t = 0; s < dim_; ++s) {
            if (s != k) e.key[t++] = h.v[s];
          }
          std::sort(e.key.begin(), e.key.begin() + (dim_ - 1));
          e.facet = hid;
          e.slot = k;
          ridges_.push_back(e);
        }
        ++serial_;
        for (int src : {fid, gid}) {
          // Copy: push_conflict may grow point lists but not facet lists of src.
          for (int q : facets_[src].conflicts) {
            if (q == p || done_[q] || seen_[q] == serial_) continue;
            seen_[q] = serial_;
            add_if_conflict(hid, q);
          }
        }
        created_.push_back(hid);
      }
    }

    std::sort(ridges_.begin(), ridges_.end(),
              [](const RidgeEntry& a, const RidgeEntry& b) { return a.key < b.key; });
    if (ridges_.size() % 2 != 0) degenerate("inconsistent horizon", {}, p);
    for (std::size_t r = 0; r < ridges_.size(); r += 2) {
      const RidgeEntry& a = ridges_[r];
      const RidgeEntry& b = ridges_[r + 1];
      if (a.key != b.key) degenerate("inconsistent horizon", {}, p);
      facets_[a.facet].nb[a.slot] = b.facet;
      facets_[b.facet].nb[b.slot] = a.facet;
    }

    for (int fid : visible_) {
      WorkFacet& f = facets_[fid];
      f.alive = false;
      ++f.gen;
      std::vector<int>().swap(f.conflicts);
      free_.push_back(fid);
    }
    std::vector<ConflictRef>().swap(point_conflicts_[p]);
    done_[p] = true;
  }

  const Configuration& config_;
  int dim_;
  int n_;
  Vec interior_{};
  std::vector<WorkFacet> facets_;
  std::vector<int> free_;
  std::vector<int> simplex_facets_;
  std::vector<std::vector<ConflictRef>> point_conflicts_;
  std::vector<std::size_t> compact_at_;
  std::vector<std::uint64_t> seen_;
  std::vector<bool> done_;
  std::uint64_t serial_ = 0;
  std::vector<int> visible_;
  std::vector<int> created_;
  std::vector<RidgeEntry> ridges_;
};

// d = 1: the hull is the polygon through the points in angular order.
std::vector<Facet> circle_hull(const Configuration& config) {
  const std::size_t n = config.size();
  std::vector<std::pair<double, std::size_t>> angles(n);
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = config.point(i);
    angles[i] = {std::atan2(p[1], p[0]), i};
    cx += p[0] / n;
    cy += p[1] / n;
  }
  std::sort(angles.begin(), angles.end());
  std::vector<Facet> facets;
  facets.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t ia = angles[k].second;
    const std::size_t ib = angles[(k + 1) % n].second;
    auto a = config.point(ia);
    auto b = config.point(ib);
    const double tx = b[0] - a[0];
    const double ty = b[1] - a[1];
    const double len = std::hypot(tx, ty);
    if (!(len > 1e-14)) {
      throw DegenerateError("convex_hull: duplicate points on the circle", {std::min(ia, ib), std::max(ia, ib)});
    }
    double nx = ty / len;
    double ny = -tx / len;
    double off = nx * a[0] + ny * a[1];
    if (nx * cx + ny * cy > off) {
      nx = -nx;
      ny = -ny;
      off = -off;
    }
    Facet f;
    f.vertex_indices = {std::min(ia, ib), std::max(ia, ib)};
    f.unit_normal = {nx, ny};
    f.offset_a = off;
    f.area = len;
    facets.push_back(std::move(f));
  }
  return facets;
}

double simplex_volume_about(const Configuration& config, std::span<const std::size_t> verts,
                            std::span<const double> apex) {
  const int dim = config.ambient();
  SmallMat m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    auto p = config.point(verts[i]);
    for (int k = 0; k < dim; ++k) m(i, k) = p[k] - apex[k];
  }
  double fact = 1.0;
  for (int i = 2; i <= dim; ++i) fact *= i;
  return std::fabs(m.determinant()) / fact;
}

}  // namespace

double facet_area(const Configuration& config, std::span<const std::size_t> vertex_indices) {
  const int dim = config.ambient();
  const int d = dim - 1;
  if (static_cast<int>(vertex_indices.size()) != d + 1) {
    throw DomainError("facet_area: requires d+1 vertex indices");
  }
  std::vector<std::size_t> sorted(vertex_indices.begin(), vertex_indices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("facet_area: repeated vertex index");
  }
  for (std::size_t idx : sorted) {
    if (idx >= config.size()) throw DomainError("facet_area: vertex index out of range");
  }
  SmallMat edges(d, dim);
  auto p0 = config.point(vertex_indices[0]);
  for (int i = 1; i <= d; ++i) {
    auto p = config.point(vertex_indices[i]);
    for (int k = 0; k < dim; ++k) edges(i - 1, k) = p[k] - p0[k];
  }
  const SmallMat gram = edges * edges.transpose();
  const double det = std::max(0.0, gram.determinant());
  double fact = 1.0;
  for (int i = 2; i <= d; ++i) fact *= i;
  return std::sqrt(det) / fact;
}

HullResult convex_hull(const Configuration& config) {
  const int d = config.dimension().value();
  if (d > kMaxHullDimension) {
    throw DomainError("convex_hull: supports d <= " + std::to_string(kMaxHullDimension));
  }
  if (config.size() < static_cast<std::size_t>(d + 2)) {
    throw DomainError("convex_hull: requires N >= d+2 points");
  }
  HullResult r;
  if (d == 1) {
    r.d = 1;
    r.point_count = config.size();
    r.facets = circle_hull(config);
  } else {
    IncrementalHull builder(config);
    builder.build();
    r = builder.result();
  }
  r.facet_count = r.facets.size();
  std::vector<bool> is_vertex(config.size(), false);
  double min_offset = 2.0;
  for (const Facet& f : r.facets) {
    for (std::size_t v : f.vertex_indices) is_vertex[v] = true;
    min_offset = std::min(min_offset, f.offset_a);
    r.surface_area += f.area;
  }
  r.vertex_count = static_cast<std::size_t>(std::count(is_vertex.begin(), is_vertex.end(), true));
  r.origin_inside = min_offset > 0.0;
  r.volume = hull_volume_signed(config, r);
  if (d == 2) {
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (const Facet& f : r.facets) {
      const auto& v = f.vertex_indices;
      edges.insert({v[0], v[1]});
      edges.insert({v[0], v[2]});
      edges.insert({v[1], v[2]});
    }
    const long long euler = static_cast<long long>(r.vertex_count) -
                            static_cast<long long>(edges.size()) +
                            static_cast<long long>(r.facet_count);
    r.euler_check = euler == 2 && 2 * edges.size() == 3 * r.facet_count;
  }
  return r;
}

double hull_volume_signed(const Configuration& config, const HullResult& hull) {
  double sum = 0.0;
  for (const Facet& f : hull.facets) sum += f.area * f.offset_a;
  return sum / config.ambient();
}

double hull_volume_decomposed(const Configuration& config, const HullResult& hull) {
  const int dim = config.ambient();
  std::vector<double> apex(dim, 0.0);
  std::vector<bool> seen(config.size(), false);
  std::size_t count = 0;
  for (const Facet& f : hull.facets) {
    for (std::size_t v : f.vertex_indices) {
      if (seen[v]) continue;
      seen[v] = true;
      ++count;
      auto p = config.point(v);
      for (int k = 0; k < dim; ++k) apex[k] += p[k];
    }
  }
  for (double& a : apex) a /= static_cast<double>(count);
  double sum = 0.0;
  for (const Facet& f : hull.facets) sum += simplex_volume_about(config, f.vertex_indices, apex);
  return sum;
}

double max_halfspace_violation(const Configuration& config, const HullResult& hull) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Facet& f : hull.facets) {
    for (std::size_t i = 0; i < config.size(); ++i) {
      if (std::binary_search(f.vertex_indices.begin(), f.vertex_indices.end(), i)) continue;
      auto p = config.point(i);
      double s = -f.offset_a;
      for (std::size_t k = 0; k < p.size(); ++k) s += f.unit_normal[k] * p[k];
      worst = std::max(worst, s);
    }
  }
  return worst;
}

bool covers_all_points(const HullResult& hull) {
  std::vector<bool> seen(hull.point_count, false);
  for (const Facet& f : hull.facets) {
    for (std::size_t v : f.vertex_indices) seen[v] = true;
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

}  // namespace sphcov::hull
