#pragma once

#include <stdexcept>
#include <string>

namespace cubiclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(got)) {}
};

/// A computation would exceed its configured term/point/memory budget.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Quadrature could not reach the requested tolerance within its cost guardrails.
class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(const std::string& what, double achieved, double requested)
      : Error(what + ": achieved error " + std::to_string(achieved) +
              " > requested " + std::to_string(requested)),
        achieved_(achieved),
        requested_(requested) {}
  double achieved() const { return achieved_; }
  double requested() const { return requested_; }

 private:
  double achieved_;
  double requested_;
};

class SplitUnavailable : public Error {
 public:
  SplitUnavailable() : Error("meet-in-the-middle requested but the form has no additive split") {}
};

/// Certified lower and upper bounds crossed; indicates an internal defect.
class InconsistentBounds : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

class SandwichViolation : public Error {
 public:
  using Error::Error;
};

class EmptyZeroSet : public Error {
 public:
  EmptyZeroSet() : Error("zero set is empty; normalized Weyl sum undefined") {}
};

/// Malformed input document (form, linear system, decomposition, config).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cubiclab
