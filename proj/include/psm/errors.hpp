#pragma once

#include <stdexcept>
#include <string>

namespace psm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed branch points, index sets, shapes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical failures. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureFailure : public NonConvergence {
 public:
  using NonConvergence::NonConvergence;
};

class Singular : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotSymmetric : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class TailBoundFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateTransform : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DiagonalSingularity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroDenominator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A computed frame violates one of its structural invariants
/// (realness of the normalization, imaginary period matrix, ...).
class FrameInvariantViolation : public Error {
 public:
  using Error::Error;
};

class MismatchError : public FrameInvariantViolation {
 public:
  using FrameInvariantViolation::FrameInvariantViolation;
};

class SingularHalfPeriod : public FrameInvariantViolation {
 public:
  using FrameInvariantViolation::FrameInvariantViolation;
};

}  // namespace psm
