#include "sphcov/sampling.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sphcov/errors.hpp"
#include "sphcov/io_util.hpp"
#include "sphcov/specfun.hpp"

namespace sphcov {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void fill_gaussian_direction(std::mt19937_64& rng, std::normal_distribution<double>& normal,
                             std::span<double> out) {
  double r = 0.0;
  do {
    for (double& x : out) x = normal(rng);
    r = norm(out);
  } while (r < 1e-150);
  for (double& x : out) x /= r;
}

}  // namespace

std::uint64_t stream_seed(const SeedSpec& seed, std::uint64_t attempt) {
  std::uint64_t h = splitmix64(seed.master_seed);
  h = splitmix64(h ^ seed.trial_index);
  h = splitmix64(h ^ (attempt * 0xd1b54a32d192ed03ULL));
  return h;
}

std::string to_string(ProvenanceKind kind) {
  switch (kind) {
    case ProvenanceKind::kUniform: return "uniform";
    case ProvenanceKind::kDensity: return "density";
    case ProvenanceKind::kFibonacci: return "fibonacci";
    case ProvenanceKind::kExternal: return "external";
  }
  return "unknown";
}

Configuration::Configuration(Dimension d, std::vector<double> coords, Provenance provenance)
    : d_(d), coords_(std::move(coords)), provenance_(std::move(provenance)) {
  const auto dim = static_cast<std::size_t>(d_.ambient());
  if (coords_.size() % dim != 0) {
    throw DomainError("Configuration: coordinate count is not a multiple of d+1");
  }
  n_ = coords_.size() / dim;
  if (n_ < 2) throw DomainError("Configuration: requires N >= 2");
  for (std::size_t i = 0; i < n_; ++i) {
    if (std::fabs(norm(point(i)) - 1.0) >= 1e-12) {
      throw DomainError("Configuration: point " + std::to_string(i) + " is not a unit vector");
    }
  }
}

Configuration Configuration::permuted(std::span<const std::size_t> order) const {
  const auto dim = static_cast<std::size_t>(ambient());
  std::vector<double> out;
  out.reserve(order.size() * dim);
  for (std::size_t i : order) {
    auto p = point(i);
    out.insert(out.end(), p.begin(), p.end());
  }
  return Configuration(d_, std::move(out), provenance_);
}

namespace sampling {

Configuration sample_uniform(Dimension d, std::size_t n, const SeedSpec& seed,
                             std::uint64_t attempt) {
  if (n < 2) throw DomainError("sample_uniform: requires n >= 2");
  const auto dim = static_cast<std::size_t>(d.ambient());
  std::mt19937_64 rng(stream_seed(seed, attempt));
  std::normal_distribution<double> normal;
  std::vector<double> coords(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    fill_gaussian_direction(rng, normal, std::span<double>(coords.data() + i * dim, dim));
  }
  return Configuration(d, std::move(coords),
                       Provenance{ProvenanceKind::kUniform, seed, attempt, {}});
}

Configuration sample_density(Dimension d, std::size_t n, const SeedSpec& seed,
                             const Density& eta, double eta_max, std::uint64_t attempt) {
  if (n < 2) throw DomainError("sample_density: requires n >= 2");
  if (!(eta_max > 0.0)) throw DomainError("sample_density: requires eta_max > 0");
  const auto dim = static_cast<std::size_t>(d.ambient());
  std::mt19937_64 rng(stream_seed(seed, attempt));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> coords(n * dim);
  std::vector<double> proposal(dim);
  const std::uint64_t budget = 1'000'000ULL * n;
  std::uint64_t proposals = 0;
  for (std::size_t i = 0; i < n;) {
    if (++proposals > budget) {
      throw DomainError("sample_density: rejection budget exhausted; eta_max too large?");
    }
    fill_gaussian_direction(rng, normal, proposal);
    if (unit(rng) * eta_max <= eta(proposal)) {
      std::copy(proposal.begin(), proposal.end(), coords.begin() + i * dim);
      ++i;
    }
  }
  return Configuration(d, std::move(coords),
                       Provenance{ProvenanceKind::kDensity, seed, attempt, {}});
}

Configuration fibonacci_s2(std::size_t n) {
  if (n < 2) throw DomainError("fibonacci_s2: requires n >= 2");
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  const double two_pi = 2.0 * specfun::kPi;
  const double nn = static_cast<double>(n);
  std::vector<double> coords;
  coords.reserve(3 * n);
  for (std::size_t j = 1; j <= n; ++j) {
    const double jj = static_cast<double>(j);
    const double z = 1.0 - (2.0 * jj - 1.0) / nn;
    double phi = std::fmod(specfun::kPi / golden * (nn + 1.0 - 2.0 * jj), two_pi);
    if (phi < 0.0) phi += two_pi;
    const double r = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
    double p[3] = {r * std::cos(phi), r * std::sin(phi), z};
    const double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (double v : p) coords.push_back(v / len);
  }
  return Configuration(Dimension(2), std::move(coords),
                       Provenance{ProvenanceKind::kFibonacci, {}, 0, {}});
}

Configuration parse_points(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> coords;
  std::size_t width = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == ',')) ++p;
      if (p >= end) break;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) {
        throw ParseError(origin + ":" + std::to_string(lineno) + ": malformed number");
      }
      row.push_back(v);
      p = next;
    }
    if (row.empty()) continue;
    if (width == 0) {
      width = row.size();
      if (width < 2 || width > static_cast<std::size_t>(kMaxDimension) + 1) {
        throw ParseError(origin + ":" + std::to_string(lineno) +
                         ": unsupported point width " + std::to_string(width));
      }
    } else if (row.size() != width) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": inconsistent dimension");
    }
    const double r = norm(row);
    if (std::fabs(r - 1.0) > 1e-9) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": point is off the unit sphere");
    }
    if (std::fabs(r - 1.0) >= 1e-12) {
      for (double& v : row) v /= r;
    }
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (width == 0) throw ParseError(origin + ": no points");
  const int d = static_cast<int>(width) - 1;
  if (coords.size() / width < 2) throw ParseError(origin + ": requires at least 2 points");
  return Configuration(Dimension(d), std::move(coords),
                       Provenance{ProvenanceKind::kExternal, {}, 0, origin});
}

Configuration load_external(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_points(buf.str(), path.string());
}

std::string format_points(const Configuration& config) {
  std::string out;
  out += "# d=" + std::to_string(config.dimension().value()) +
         " n=" + std::to_string(config.size()) +
         " source=" + to_string(config.provenance().kind) + "\n";
  for (std::size_t i = 0; i < config.size(); ++i) {
    auto p = config.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out += ' ';
      out += io::format_double(p[k]);
    }
    out += '\n';
  }
  return out;
}

void write_points(const Configuration& config, const std::filesystem::path& path) {
  io::write_atomic(path, format_points(config));
}

}  // namespace sampling
}  // namespace sphcov
