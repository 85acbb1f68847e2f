#pragma once

#include <stdexcept>
#include <string>

namespace shiftcalc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible matrix or correspondence shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value outside the domain of an operation (negative entry, non-essential
/// matrix, bad polynomial constant term, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on input that does not satisfy its precondition
/// (for example an unverified witness).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Two cells that should chain (b of one equals a of the next) do not.
class CompositionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace shiftcalc
