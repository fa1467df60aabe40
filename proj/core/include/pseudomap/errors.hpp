#pragma once

#include <stdexcept>
#include <string>

namespace pmap {

/// Base class for all pseudomap error conditions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// Quadric projection requested at or across the null cone.
/// Solvers catch this to trigger damping reduction.
struct NullConeViolation : Error {
  using Error::Error;
};

struct SingularMatrix : Error {
  using Error::Error;
};

/// Iterative solver exhausted its iteration budget.
struct NonConvergence : Error {
  NonConvergence(const std::string& what, int iterations, double residual)
      : Error(what), iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

/// A map left the tubular neighborhood of the embedded target.
struct OutOfTube : Error {
  using Error::Error;
};

struct NotDivergenceFree : Error {
  using Error::Error;
};

struct NotSo11 : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace pmap
