#pragma once

#include <stdexcept>
#include <string>

namespace levcs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: bad dimensions, out-of-range indices, unknown units.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A covariance matrix violated V + i*Omega >= 0 beyond the allowed slack.
class NonPhysicalState : public Error {
 public:
  using Error::Error;
};

/// The drift matrix is not strictly Hurwitz, so no steady state exists.
class NoSteadyState : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace levcs
