#pragma once

#include <stdexcept>
#include <string>

namespace ensbox {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Table or functional does not match the scenario it claims.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Malformed text or JSON input.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Input violates an operation's precondition (invalid behavior, bad spec, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A configurable resource ceiling was hit before the computation finished.
class GuardExceeded : public Error {
  public:
    using Error::Error;
};

/// A result does not fit the machine integers an algorithm works in.
class Overflow : public Error {
  public:
    using Error::Error;
};

} // namespace ensbox
