#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace normlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression source. `position()` is the 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Any failure while evaluating an expression (pole, branch point, overflow).
class EvalError : public Error {
 public:
  using Error::Error;
};

class PoleError : public EvalError {
 public:
  using EvalError::EvalError;
};

class BranchError : public EvalError {
 public:
  using EvalError::EvalError;
};

/// Geometric precondition violated: point outside a domain, dimension mismatch.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to a kernel (zero direction, nonpositive scale, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace normlab
