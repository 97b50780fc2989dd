#pragma once

#include <stdexcept>
#include <string>

namespace mkrum {

/// Parameter or input outside an operation's contract.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Valid parameters for which a particular bound is not established
/// (e.g. the (n-f)-MultiKrum lower bound outside n > 3f).
struct OutOfRegime : std::domain_error {
  using std::domain_error::domain_error;
};

/// Exhaustive enumeration would be too large to run.
struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An empirical ratio exceeded a proven upper bound. Always a bug.
struct TheoryViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace mkrum
