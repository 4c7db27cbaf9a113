#pragma once

#include <stdexcept>
#include <string>

namespace moreau {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller misuse: dimension mismatch, malformed configuration, bad parameters.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the domain an operation requires.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Geometry, cone or domain combination the library does not handle.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of a proximity operator (qualification condition, existence
/// condition, admissible point) is not certified.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InfeasibleStartError : public Error {
 public:
  using Error::Error;
};

class NotAFrameError : public Error {
 public:
  using Error::Error;
};

}  // namespace moreau
