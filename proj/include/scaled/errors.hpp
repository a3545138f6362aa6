#pragma once

#include <stdexcept>
#include <string>

namespace scaled {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad numeric parameter (index out of range, dimension too small, ...).
struct ParameterError : Error {
  using Error::Error;
};

// A cell id that does not exist in the complex it was looked up in.
struct ReferenceError : Error {
  using Error::Error;
};

// Inconsistent assignment data (partial maps, face data).
struct ConstraintError : Error {
  using Error::Error;
};

// A map that violates a decoration, or mismatched decoration kinds.
struct DecorationError : Error {
  using Error::Error;
};

// Malformed input file.
struct FormatError : Error {
  using Error::Error;
};

// Caller-side precondition of an algorithm does not hold.
struct PreconditionError : Error {
  using Error::Error;
};

// A filler demanded by an algorithm was not found within the available cells.
struct FibrancyError : Error {
  using Error::Error;
};

}  // namespace scaled
