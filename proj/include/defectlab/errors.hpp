#pragma once

#include <stdexcept>
#include <string>

namespace defectlab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation at a pole (Gamma at non-positive integers).
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Adaptive refinement exhausted its panel budget above tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A planar path or swept support came too close to the puncture at the origin.
class PunctureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A singular value fell inside the forbidden ambiguity band; the grid is
/// too coarse to decide the rank.
class RankAmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A result failed its contract tolerance; the message lists the residuals.
class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace defectlab
