#pragma once

#include <stdexcept>
#include <string>

namespace sidak {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A cross-sample tie sits on a threshold and the tie policy forbids it.
class TieError : public Error {
 public:
  TieError(const std::string& what, double value) : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Exhaustive enumeration was requested beyond the supported size.
class SizeBoundError : public Error {
 public:
  using Error::Error;
};

/// Extended-precision evaluation did not settle within the escalation cap.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace sidak
