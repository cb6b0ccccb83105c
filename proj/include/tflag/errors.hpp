#pragma once

#include <stdexcept>
#include <string>

namespace tflag {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested structure size exceeds what enumeration/canonicalization supports.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// A model or flag violates the axioms of its theory.
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

/// Vertex or label index out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Incompatible theories, types or levels in an algebra operation.
class FlagTypeError : public Error {
 public:
  using Error::Error;
};

/// A model cannot be used to evaluate an element.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Construction parameters violate their preconditions.
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

/// Matrix shape or symmetry problem.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (model text, element or certificate JSON).
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace tflag
