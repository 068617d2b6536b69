#pragma once

#include <stdexcept>
#include <string>

namespace matderiv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Errors caused by inputs violating a route's mathematical precondition
/// (non-Hermitian input to a spectral route, eigenvalue too close to the
/// chemical potential, ...). The CLI maps these to exit code 2.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotReal : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotTriangular : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotDag : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class TooCloseToMu : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DegenerateGroundState : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class EmptyIndex : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class MissingJetTerm : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class OrderExceeded : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class InsufficientDerivatives : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Raised instead of running a computation whose cost exceeds a configured cap.
class ComplexityRefusal : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ReferenceValidationFailed : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or command-line configuration (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace matderiv
