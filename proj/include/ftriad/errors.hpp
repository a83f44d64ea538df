#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ftriad {

// Base class for all domain errors thrown by the library.  `type()` returns a
// stable machine-readable tag used by the CLI's JSON error output.
class Error : public std::runtime_error {
 public:
  Error(std::string type, const std::string& message)
      : std::runtime_error(message), type_(std::move(type)) {}
  const std::string& type() const { return type_; }

 private:
  std::string type_;
};

// A matrix that must be invertible is singular within tolerance.
class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(const std::string& message)
      : Error("SingularMatrix", message) {}
};

// The K-contraction of a state with the chosen effect is not invertible, so
// no bipartite witness exists for that effect.
class NotStronglyMaximal : public Error {
 public:
  explicit NotStronglyMaximal(const std::string& message)
      : Error("NotStronglyMaximal", message) {}
};

// classify_algebra was called on an algebra whose axioms were never checked.
class UnverifiedAlgebra : public Error {
 public:
  explicit UnverifiedAlgebra(const std::string& message)
      : Error("UnverifiedAlgebra", message) {}
};

// A diagram handed to the normalizer contains nodes that do not belong to the
// single algebra being normalized (foreign algebra generators, boxes, states).
class ForeignNode : public Error {
 public:
  explicit ForeignNode(const std::string& message)
      : Error("ForeignNode", message) {}
};

// A corrected-multiplexer input has zero overlap with the selector axis.
class ZeroOverlap : public Error {
 public:
  ZeroOverlap(std::size_t which, const std::string& message)
      : Error("ZeroOverlap", message), which_(which) {}
  std::size_t which() const { return which_; }

 private:
  std::size_t which_;
};

// Internal synthesis self-check failed; indicates a bug, not a bad input.
class SynthesisResidualExceeded : public Error {
 public:
  explicit SynthesisResidualExceeded(const std::string& message)
      : Error("SynthesisResidualExceeded", message) {}
};

// Text input (DSL, ket expression, CLI argument) failed to parse.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error("ParseError", message + " (at position " +
                                std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Lookup of a registered name (algebra, box, catalog entry) failed.
class UnknownName : public Error {
 public:
  explicit UnknownName(const std::string& message)
      : Error("UnknownName", message) {}
};

// Shape, arity, or dimension mismatch between values.
class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& message)
      : Error("DimensionMismatch", message) {}
};

// Any other precondition violation (zero vectors, bad parameters, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error("DomainError", message) {}
};

}  // namespace ftriad
