#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qrep {

/// Malformed or inconsistent input (bad presentation, non-commuting square,
/// unresolved name). Maps to CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operands live over different coefficient rings or different quivers.
class Incompatible : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// The operation is outside its certified scope and declines to answer
/// (e.g. injectivity on a quiver that is not source injective).
class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an algorithm does not hold for the input.
class PreconditionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InvalidInput(what + " at line " + std::to_string(line) + ", column " +
                     std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace qrep
