#pragma once

#include <stdexcept>

namespace qmcwav {

// Bad input: violated precondition, malformed file, inconsistent parameters.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation needed more work than its budget allows (enumeration size,
// quadrature refinement, cell counts).
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmcwav
