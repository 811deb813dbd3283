#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aplift {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter is outside its admissible range (d = 0, p outside [0,1], ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An interval or box does not lie inside the ambient window.
class OutOfWindow : public Error {
 public:
  using Error::Error;
};

// A witness violates its own structural invariants (e.g. empty H).
class MalformedWitness : public Error {
 public:
  using Error::Error;
};

// A search would exceed its configured node budget; the answer is unknown.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Syntax or arity error in the DSL or one of the text file formats.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A self-check that cannot fail unless the implementation is wrong.
class InternalFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace aplift
