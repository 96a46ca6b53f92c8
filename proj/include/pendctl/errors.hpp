#pragma once

#include <stdexcept>
#include <string>

namespace pendctl {

// Numerical failure (non-convergence, blow-up). Distinct from
// std::invalid_argument so callers can map the two to different exit codes.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pendctl
