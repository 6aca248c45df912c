#pragma once

#include <stdexcept>
#include <string>

namespace qdel {

// Malformed arguments: out-of-range parameters, unnormalized states, shape
// mismatches.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters that are individually legal but cannot be realized by any set of
// machine vectors (the Gram matrix is not positive semidefinite).
class Infeasible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace qdel
