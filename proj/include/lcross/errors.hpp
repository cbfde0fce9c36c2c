#pragma once

#include <stdexcept>
#include <string>

namespace lcross {

/// Argument outside a function's domain (e.g. the tangent model at its pole).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation not defined for the given model kind.
class UnsupportedModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative procedure (series, quadrature, propagation) failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive step fell below the resolvable size.
class StepUnderflow : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

/// Two transition points tie for the lowest imaginary part.
class AmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coalescing transition points: d(E^2)/dtau vanishes at tau_c.
class DegenerateZeroError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lcross
