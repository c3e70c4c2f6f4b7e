#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphcov {

// Argument outside the documented domain of a numeric routine.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input point set that violates general position (coplanar facet points,
// duplicate points). Carries the offending point indices.
class DegenerateError : public std::runtime_error {
 public:
  DegenerateError(const std::string& what, std::vector<std::size_t> indices)
      : std::runtime_error(what), indices_(std::move(indices)) {}

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  std::vector<std::size_t> indices_;
};

// Malformed point-set or config file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sphcov
