#pragma once

#include <stdexcept>
#include <string>

namespace specstab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: degenerate polygons, bad parameters, inconsistent sizes.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed (factorization, non-convergence, singular system).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The projection constants do not satisfy B < 1, so the eigenvalue bound is undefined.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace specstab
