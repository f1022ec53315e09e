#pragma once

#include <stdexcept>
#include <string>

namespace kwise {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An explicit enumeration would exceed the configured cap (2^24 atoms, 63-bit masks, ...).
class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A precondition on a scalar argument failed (odd N, p < k, nonpositive p, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (rationals, JSON documents).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant; never expected to surface.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace kwise
