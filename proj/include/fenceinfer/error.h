#pragma once

#include <stdexcept>
#include <string>

namespace fenceinfer {

class Error : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

// Syntax errors carry the 1-based position of the offending token.
class ParseError : public Error
{
 public:
  ParseError(const std::string & msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column)
  {
  }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A transition system violates one of the standing assumptions on
// (Init, trans, Bad).
class AssumptionError : public Error
{
 public:
  using Error::Error;
};

// Brute-force enumeration requested beyond the configured cap.
class CapExceeded : public Error
{
 public:
  using Error::Error;
};

// The SAT backend failed (solver crash, unparsable output, ...).
class BackendError : public Error
{
 public:
  using Error::Error;
};

// A witness returned by a backend failed re-validation. Never expected.
class InternalError : public Error
{
 public:
  using Error::Error;
};

class UsageError : public Error
{
 public:
  using Error::Error;
};

}  // namespace fenceinfer
