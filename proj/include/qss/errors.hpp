#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qss {

enum class ErrorCode {
  kInvalidArgument,
  kGuardExceeded,
  kEmptySubset,
  kInvalidPositions,
  kDimensionMismatch,
  kUnsupportedBasis,
  kNonIdealScheme,
  kFieldTooSmall,
  kNotPrime,
  kParseError,
  kInvariantViolation,
  kNotAuthorized,
  kTooManyPlayers,
  kLengthError,
  kSchemeMismatch,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code is stable and is what the
/// CLI maps onto exit statuses; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message, int line);

  ErrorCode code() const noexcept { return code_; }
  /// Source line for parse errors, 0 otherwise.
  int line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  int line_ = 0;
};

}  // namespace qss
