#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace removal {

/// Bad caller input: shape mismatch, out-of-range index, violated precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ParseErrorKind {
  kMalformedHeader,
  kSymbolOutOfRange,
  kRowLengthMismatch,
  kRowCountMismatch,
  kMalformedSymbol,
  kMalformedRecord,
};

class ParseError : public InputError {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

  [[nodiscard]] ParseErrorKind kind() const { return kind_; }
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

/// A guardrail refused the work (enumeration budget, exact-solver cap, size cap).
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact count does not fit in 128 bits.
class CountOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace removal
