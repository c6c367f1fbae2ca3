#pragma once

#include <stdexcept>
#include <string>

namespace locrad {

// Base of every error thrown by the library. The CLI maps the subclasses to
// exit codes: ConfigurationError -> 2, everything else -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/matrix shapes that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its domain (r < 0, K <= 1, draws == 0, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Exact enumeration requested above the sign-vector cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Unknown theorem id, unknown kernel kind, unknown claim id.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Invalid model parameter (e.g. kernel width <= 0) or an instance that does
// not satisfy the hypotheses a validation run depends on.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Numerical breakdown: non-PSD Gram matrix, non-monotone fixed-point trace.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace locrad
