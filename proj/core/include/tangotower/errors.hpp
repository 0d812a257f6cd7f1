#pragma once

#include <stdexcept>
#include <string>

namespace tango {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Structural misuse: combining classes that live at different lattice levels.
class LevelMismatchError : public Error {
public:
  using Error::Error;
};

/// A stated precondition (gcd, divisibility, range) does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Integral division of a divisor class failed. Carries the first offending
/// coordinate name so callers can report it.
class DivisionError : public Error {
public:
  DivisionError(const std::string& what, std::string coordinate)
      : Error(what), coordinate_(std::move(coordinate)) {}
  const std::string& coordinate() const { return coordinate_; }

private:
  std::string coordinate_;
};

/// Malformed input: bad JSON, unknown fields, values out of schema.
class InputError : public Error {
public:
  using Error::Error;
};

/// Request outside the supported model (positive bundle twists, missing
/// field-extension table entry, precision exhaustion).
class UnsupportedError : public Error {
public:
  using Error::Error;
};

}  // namespace tango
