#pragma once

#include <stdexcept>
#include <string>

namespace pathexp {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroOriginError : Error {
  using Error::Error;
};

struct NonFiniteError : Error {
  using Error::Error;
};

struct TooShortError : Error {
  using Error::Error;
};

struct EmptyInputError : Error {
  using Error::Error;
};

struct ZeroDenominatorError : Error {
  using Error::Error;
};

// Raised when every normalised-curvature observation in a window had to be
// excluded by the denominator guard.
struct AllDegenerateError : Error {
  using Error::Error;
};

// Raised when a calibration run yields no windows (or an empty pool for a
// statistic): the calibration regime is misconfigured.
struct CalibrationError : Error {
  using Error::Error;
};

struct BadConfigError : Error {
  using Error::Error;
};

struct MalformedCsvError : Error {
  using Error::Error;
};

struct InteriorGapError : Error {
  using Error::Error;
};

struct NonMonotonePeriodsError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace pathexp
