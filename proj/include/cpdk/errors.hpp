#pragma once

#include <stdexcept>
#include <string>

namespace cpdk {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: bad shapes, unknown labels, inconsistent coefficient
/// sums, schema violations, unparsable literals.  CLI exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public InputError {
 public:
  using InputError::InputError;
};

class NumericInputError : public InputError {
 public:
  using InputError::InputError;
};

class LookupError : public InputError {
 public:
  using InputError::InputError;
};

class NormalizationError : public InputError {
 public:
  using InputError::InputError;
};

class ReferenceError : public InputError {
 public:
  using InputError::InputError;
};

class IncompleteTableError : public InputError {
 public:
  using InputError::InputError;
};

class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

/// A mathematical property of otherwise well-formed data failed to hold
/// (broken Hermitian symmetry, indefinite Gram data, ...).  CLI exit code 1.
class PropertyViolation : public Error {
 public:
  using Error::Error;
};

class SymmetryError : public PropertyViolation {
 public:
  using PropertyViolation::PropertyViolation;
};

class PositivityError : public PropertyViolation {
 public:
  using PropertyViolation::PropertyViolation;
};

class NotCpdError : public PropertyViolation {
 public:
  using PropertyViolation::PropertyViolation;
};

/// Filesystem failures.  CLI exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpdk
