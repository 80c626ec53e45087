#pragma once

#include <stdexcept>
#include <string>

namespace qds {

// Raised when inputs describe a physically impossible or insecure regime
// (as opposed to a caller bug, which raises std::invalid_argument or
// std::domain_error).  CLI maps this to its "infeasible" exit code.
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qds
