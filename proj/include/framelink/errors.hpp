#pragma once

#include <stdexcept>
#include <string>

namespace framelink {

enum class ErrorCode {
  // diagram validation
  DanglingArc,
  BrokenCycle,
  EmptyCrossing,
  ArcNotOnComponent,
  IndexOutOfRange,
  SameComponent,
  // codecs
  SyntaxError,
  ArcCountError,
  UnpairedCrossing,
  SignMismatch,
  InvalidPairing,
  UnsupportedCode,
  InvalidFormat,
  // moves
  StaleSite,
  // torus / surgery
  NotALongitude,
  ZeroClass,
  NonIntegerCoefficients,
  // geometry
  DegenerateAfterRetries,
  CurvesTooClose,
  NonIntegerResult,
  UndersampledField,
  TangentField,
  OffsetTooLarge,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(ErrorCode code, const std::string& message, int context_index)
      : std::runtime_error(message), code_(code), context_index_(context_index) {}

  ErrorCode code() const noexcept { return code_; }
  // Index of the offending crossing/component when known, else -1.
  int context_index() const noexcept { return context_index_; }

private:
  ErrorCode code_;
  int context_index_ = -1;
};

// Parse failure with a 1-based source position.
class ParseError : public Error {
public:
  ParseError(ErrorCode code, const std::string& message, int line, int col)
      : Error(code, message), line_(line), col_(col) {}

  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }

private:
  int line_;
  int col_;
};

}  // namespace framelink
