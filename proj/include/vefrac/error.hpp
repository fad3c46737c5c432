#pragma once

#include <stdexcept>
#include <string>

namespace vefrac {

// Invalid input: malformed files, bad parameters, inconsistent meshes.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solver non-convergence, lattice caps exceeded and similar failures of the
// numerics rather than the input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vefrac
