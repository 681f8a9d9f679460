#pragma once

#include <stdexcept>
#include <string>

namespace diraclab {

// Precondition or validation failure on caller-supplied data.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure: eigensolver non-convergence, lost unitarity, blow-up.
class ComputationalError : public std::runtime_error {
 public:
  explicit ComputationalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace diraclab
