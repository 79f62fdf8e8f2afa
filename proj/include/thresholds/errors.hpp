#pragma once

#include <stdexcept>
#include <string>

namespace thresholds {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input, bad parameter, or a value outside an operation's domain.
// The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An enumeration cap was exceeded. CLI exit code 3.
class CapError : public Error {
 public:
  using Error::Error;
};

class TrivialFamilyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BadParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateMeasureError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotATreeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotDivisibleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NoEmbeddingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class GenerationFailedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class GroundSetTooLargeError : public CapError {
 public:
  using CapError::CapError;
};

class TooManyMinimalSetsError : public CapError {
 public:
  using CapError::CapError;
};

class GraphTooLargeError : public CapError {
 public:
  using CapError::CapError;
};

class TooLargeError : public CapError {
 public:
  using CapError::CapError;
};

// Signals a bug: the sweep is theorem-backed and must always find a witness.
class SweepFailedError : public Error {
 public:
  using Error::Error;
};

}  // namespace thresholds
