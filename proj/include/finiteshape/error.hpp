#pragma once

#include <stdexcept>
#include <string>

namespace finiteshape {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or configuration, detected before any work is done.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed input files.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A distance table that is not a metric.
class MetricError : public Error {
 public:
  using Error::Error;
};

// A construction invariant failed at runtime. Never clamped or ignored.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Enumeration exceeded a configured size budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace finiteshape
