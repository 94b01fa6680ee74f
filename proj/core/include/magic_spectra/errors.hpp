#pragma once
#include <stdexcept>

namespace msp {

// Thrown on bad user input (parameters out of domain, malformed files, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an iterative solver fails to reach its tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a request would exceed a configured memory/size budget.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace msp
