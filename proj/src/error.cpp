#include "lmfd/error.hpp"

namespace lmfd {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::NonMonotonicIndex: return "NonMonotonicIndex";
    case ErrorCode::DuplicateColumn: return "DuplicateColumn";
    case ErrorCode::InvalidTable: return "InvalidTable";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::NotInGrammar: return "NotInGrammar";
    case ErrorCode::ValueOutOfBounds: return "ValueOutOfBounds";
    case ErrorCode::SpanOutOfRange: return "SpanOutOfRange";
    case ErrorCode::IncompleteBinding: return "IncompleteBinding";
    case ErrorCode::TooFewSensors: return "TooFewSensors";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace lmfd
