#pragma once

#include <stdexcept>
#include <string>

namespace orbitlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was violated by its input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its configured element cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A finite computational window was too small for the requested query.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Grid refinement did not settle within the allowed number of halvings.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbitlab
