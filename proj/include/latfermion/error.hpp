#pragma once

#include <stdexcept>
#include <string>

namespace latfermion {

/// Base class of everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The input does not describe a valid value: out-of-range indices, malformed
/// files, contradictory fields.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The input is well formed but the requested constraint set cannot be met
/// (infeasible trace condition, empty Dirac sea, Φ pushed below ε).
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// A numerical result contradicts an identity that holds exactly in exact
/// arithmetic. Indicates a defect, not bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace latfermion
