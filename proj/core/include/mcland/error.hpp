#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcland {

enum class ErrorCode {
  UnknownPattern,
  InvalidParams,
  EmptyS,
  SNotRealizable,
  DimensionMismatch,
  InvalidS,
  MissingGraph,
  ZeroMatrix,
  NoOddCycle,
  Disconnected,
  SingularBlock,
  NotPSD,
  SingularHessian,
  NotNearCritical,
  MissingS,
  UnmatchedEndpoint,
  ConfigParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mcland
