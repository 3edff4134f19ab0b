#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ridge {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Expression evaluation failure: unbound variable or a domain error.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure in problem setup or solving: dependent directions,
/// singular completion, vanishing slice mass, inconsistent quadrature.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument shapes or values passed to the API.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace ridge
