#pragma once

#include <stdexcept>
#include <string>

namespace cml {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration: unknown experiment, missing or out-of-range
/// parameter. Raised before any computation or file output happens.
struct ConfigError : Error {
  using Error::Error;
};

/// Numeric failure during a computation: singular metric, non-Lorentzian
/// input, invalid geometry, diverging trajectory, double measurement.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace cml
