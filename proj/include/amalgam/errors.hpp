#pragma once

#include <stdexcept>
#include <string>

namespace amalgam {

/// Invalid input: a parameter violates a documented range or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not be carried out to the requested accuracy
/// (aliasing, quadrature tolerance, divergence, non-contraction).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AliasingError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

}  // namespace amalgam
