#pragma once

#include <stdexcept>
#include <string>

namespace des {

// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A shared event carries contradictory controllability/observability flags.
class AttributeConflict : public Error {
 public:
  using Error::Error;
};

// An operation requiring identical alphabets was given different ones.
class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

// A structural precondition of an operation does not hold.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

// A normality-based computation was requested without a projection.
class MissingProjection : public Error {
 public:
  using Error::Error;
};

// Coordination alphabet constraints are violated (e.g. shared events not in
// the coordinator alphabet, or a specification alphabet that is not the union
// of the subsystem alphabets).
class AlphabetConstraintViolated : public Error {
 public:
  using Error::Error;
};

// The specification (or its prefix closure) is not conditionally
// decomposable with respect to the requested alphabets.
class NotConditionallyDecomposable : public Error {
 public:
  using Error::Error;
};

// A generator document that cannot be read at the text level.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// A generator document that reads fine at the text level but does not
// describe a valid generator (nondeterminism, unknown names, missing
// initial state).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An internal cross-check failed. Indicates a bug, not bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace des
