#pragma once

#include <stdexcept>
#include <string>

namespace iwasawa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different truncated rings.
class ParamMismatch : public Error {
 public:
  using Error::Error;
};

/// The answer is not determined at the working precision (p^N, X^M).
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// Weierstrass division by a series with positive mu.
class NotDivisible : public Error {
 public:
  using Error::Error;
};

class SizeExceeded : public Error {
 public:
  using Error::Error;
};

class DimensionBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NotDistinguished : public Error {
 public:
  using Error::Error;
};

class NotSquare : public Error {
 public:
  using Error::Error;
};

/// Growth intercept or slope did not settle inside the level window.
class Unstable : public Error {
 public:
  using Error::Error;
};

class CongruenceViolation : public Error {
 public:
  using Error::Error;
};

class CorankMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed arguments (bad prime, negative sizes, inconsistent shapes).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Line and column are 1-based; 0 when the problem is
/// structural rather than tied to a position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? message : message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace iwasawa
