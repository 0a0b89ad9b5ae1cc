#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace doflab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the documented range (user count, K_P, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// A point or weight vector mentions a variable the region does not have.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Substitution produced a row that no choice of the free variables satisfies.
class EmptyRegionError : public Error {
 public:
  using Error::Error;
};

/// Query is outside what the exact backend supports (no approximation fallback).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Zero-forcing set leaves no null space, or a scheme cannot be executed.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in scheme text; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace doflab
