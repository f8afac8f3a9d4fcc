#pragma once

#include <stdexcept>
#include <string>

namespace rabi2q {

/// Base of every numerical failure raised by the library. Configuration
/// mistakes use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The photon-number cutoff is too small for the requested result.
class TruncationInsufficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SmallDenominator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// |g1| == |g2|: the off-diagonal blocks O_j cannot be inverted.
class SingularCoupling : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OverflowDetected : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A recurrence step divides by a vanishing leading coefficient.
class StepSingular : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateResolvent : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InvalidDensityMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rabi2q
