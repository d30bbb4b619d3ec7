#pragma once

#include <stdexcept>
#include <string>

namespace qsync {

// Base class for all qsync errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Two fields on different grids were combined.
struct GridMismatchError : Error {
  using Error::Error;
};

// An argument left the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// A wave function's mass fell below the eps_mass floor where a
// normalization (or center of mass) is required.
struct VanishingMassError : Error {
  using Error::Error;
};

// NaN/Inf detected during time stepping.
struct NumericalInstabilityError : Error {
  using Error::Error;
};

// Invalid configuration or CLI usage.
struct ConfigError : Error {
  using Error::Error;
};

// Malformed on-disk data (trajectory, checkpoint, ...).
struct ParseError : Error {
  using Error::Error;
};

// Filesystem failure.
struct IoError : Error {
  using Error::Error;
};

}  // namespace qsync
