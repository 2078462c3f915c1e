#include "qss/errors.hpp"

namespace qss {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kGuardExceeded: return "GuardExceeded";
    case ErrorCode::kEmptySubset: return "EmptySubset";
    case ErrorCode::kInvalidPositions: return "InvalidPositions";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnsupportedBasis: return "UnsupportedBasis";
    case ErrorCode::kNonIdealScheme: return "NonIdealScheme";
    case ErrorCode::kFieldTooSmall: return "FieldTooSmall";
    case ErrorCode::kNotPrime: return "NotPrime";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kNotAuthorized: return "NotAuthorized";
    case ErrorCode::kTooManyPlayers: return "TooManyPlayers";
    case ErrorCode::kLengthError: return "LengthError";
    case ErrorCode::kSchemeMismatch: return "SchemeMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Error::Error(ErrorCode code, const std::string& message, int line)
    : std::runtime_error(std::string(to_string(code)) + ": line " + std::to_string(line) + ": " +
                         message),
      code_(code),
      line_(line) {}

}  // namespace qss
