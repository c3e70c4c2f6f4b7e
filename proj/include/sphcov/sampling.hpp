#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sphcov/constants.hpp"

namespace sphcov {

/// Reproducible per-trial stream identifier.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

/// Seed of the engine driving one trial. A pure function of its inputs;
/// `attempt` selects replacement draws after a degenerate sample.
std::uint64_t stream_seed(const SeedSpec& seed, std::uint64_t attempt = 0);

enum class ProvenanceKind { kUniform, kDensity, kFibonacci, kExternal };

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::kUniform;
  SeedSpec seed{};
  std::uint64_t attempt = 0;
  std::string path;
};

std::string to_string(ProvenanceKind kind);

/// N unit vectors in R^{d+1}, stored row-major. Immutable once built.
class Configuration {
 public:
  Configuration(Dimension d, std::vector<double> coords, Provenance provenance);

  Dimension dimension() const noexcept { return d_; }
  int ambient() const noexcept { return d_.ambient(); }
  std::size_t size() const noexcept { return n_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(ambient()),
            static_cast<std::size_t>(ambient())};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  /// Same point set in a different order: result point i = this->point(order[i]).
  Configuration permuted(std::span<const std::size_t> order) const;

 private:
  Dimension d_;
  std::size_t n_;
  std::vector<double> coords_;
  Provenance provenance_;
};

using Density = std::function<double(std::span<const double>)>;

namespace sampling {

Configuration sample_uniform(Dimension d, std::size_t n, const SeedSpec& seed,
                             std::uint64_t attempt = 0);

/// Rejection sampling from eta * d(sigma_d); eta <= eta_max is the caller's
/// promise.
Configuration sample_density(Dimension d, std::size_t n, const SeedSpec& seed,
                             const Density& eta, double eta_max,
                             std::uint64_t attempt = 0);

/// Spherical Fibonacci points on S^2.
Configuration fibonacci_s2(std::size_t n);

/// One point per line, d+1 whitespace-separated decimals, '#' comments.
Configuration load_external(const std::filesystem::path& path);
Configuration parse_points(const std::string& text, const std::string& origin);
std::string format_points(const Configuration& config);
void write_points(const Configuration& config, const std::filesystem::path& path);

}  // namespace sampling
}  // namespace sphcov
