#pragma once

#include <stdexcept>
#include <string>

namespace cqavwc {

// Base of every error raised by the library. The CLI maps subclasses to exit
// codes, so new error kinds should derive from one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operator or distribution failed one of its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Mismatched or degenerate shapes (non-square matrices, empty alphabets).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A label was not found in the alphabet it was looked up in.
class LabelError : public Error {
 public:
  using Error::Error;
};

/// Matrix expected to be positive semidefinite is not.
class PsdError : public Error {
 public:
  using Error::Error;
};

/// Operator outside the range 0 <= X <= id.
class OperatorRangeError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace cqavwc
