#pragma once

#include <stdexcept>
#include <string>

namespace fbp {

// bad input: config files, parameter ranges, mismatched meshes -> cli exit 2
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// numerical failure: non-convergence, singular factorization, collapsed geometry -> cli exit 1
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a check ran to completion and the property it probes does not hold -> cli exit 3
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fbp
