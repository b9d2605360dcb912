#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nullframe {

// Root of every error raised by the library. The CLI maps the three
// intermediate categories onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

// Malformed or inconsistent user input (exit code 1).
class InputError : public Error {
 public:
  using Error::Error;
};

// Signature inference failed (exit code 3).
class SignatureError : public Error {
 public:
  using Error::Error;
};

// Numerical or geometric failure while evaluating a valid input.
class GeometryError : public Error {
 public:
  using Error::Error;
};

#define NULLFRAME_ERROR(Name, Base)                              \
  class Name : public Base {                                     \
   public:                                                       \
    using Base::Base;                                            \
    const char* kind() const noexcept override { return #Name; } \
  }

NULLFRAME_ERROR(UnknownIdentifier, InputError);
NULLFRAME_ERROR(ParamOutOfRange, InputError);
NULLFRAME_ERROR(ValidationError, InputError);
NULLFRAME_ERROR(UnknownExample, InputError);

NULLFRAME_ERROR(NoConsistentSignature, SignatureError);
NULLFRAME_ERROR(AmbiguousSignature, SignatureError);

NULLFRAME_ERROR(DomainError, GeometryError);
NULLFRAME_ERROR(NonFinite, GeometryError);
NULLFRAME_ERROR(DimensionMismatch, GeometryError);
NULLFRAME_ERROR(NoNondegenerateComplement, GeometryError);
NULLFRAME_ERROR(SingularPairing, GeometryError);
NULLFRAME_ERROR(DegenerateParametrization, GeometryError);
NULLFRAME_ERROR(FrameIncomplete, GeometryError);
NULLFRAME_ERROR(FrameDiscontinuity, GeometryError);
NULLFRAME_ERROR(NotTangent, GeometryError);
NULLFRAME_ERROR(DistributionTooSmall, GeometryError);

#undef NULLFRAME_ERROR

class SyntaxError : public InputError {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : InputError("syntax error at " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }
  const char* kind() const noexcept override { return "SyntaxError"; }

 private:
  std::size_t position_;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : InputError("parse error at line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const char* kind() const noexcept override { return "ParseError"; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace nullframe
