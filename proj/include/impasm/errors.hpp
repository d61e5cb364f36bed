#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace impasm {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ForeignElement : public Error {
 public:
  ForeignElement() : Error("element belongs to a different lattice") {}
};

class CycleError : public Error {
 public:
  using Error::Error;
};

class NotALattice : public Error {
 public:
  using Error::Error;
};

class NotHeyting : public Error {
 public:
  using Error::Error;
};

class AxiomViolation : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class SeparatorViolation : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

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

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable '" + name + "'") {}
};

class UnknownMacro : public Error {
 public:
  explicit UnknownMacro(const std::string& name) : Error("unknown macro '" + name + "'") {}
};

class UnfilledHole : public Error {
 public:
  using Error::Error;
};

class CarrierMismatch : public Error {
 public:
  using Error::Error;
};

class NotTracked : public Error {
 public:
  NotTracked(const std::string& message, std::string tracking_value)
      : Error(message), tracking_value_(std::move(tracking_value)) {}

  /// Name of the computed meet that fell outside the separator.
  const std::string& tracking_value() const noexcept { return tracking_value_; }

 private:
  std::string tracking_value_;
};

class NotStrongMono : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A guarantee of the construction failed to hold: a bug, not bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace impasm
