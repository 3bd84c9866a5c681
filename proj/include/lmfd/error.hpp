#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lmfd {

enum class ErrorCode {
  Io,
  MissingValue,
  NonMonotonicIndex,
  DuplicateColumn,
  InvalidTable,
  UnknownColumn,
  EmptyResult,
  NonFiniteInput,
  LengthMismatch,
  SyntaxError,
  UnknownFunction,
  NotInGrammar,
  ValueOutOfBounds,
  SpanOutOfRange,
  IncompleteBinding,
  TooFewSensors,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code so the
/// CLI can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failures additionally report the byte offset into the input text.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorCode code, const std::string& message, std::size_t position)
      : Error(code, message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace lmfd
