#include "mcland/error.hpp"

namespace mcland {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownPattern: return "UnknownPattern";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::EmptyS: return "EmptyS";
    case ErrorCode::SNotRealizable: return "SNotRealizable";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidS: return "InvalidS";
    case ErrorCode::MissingGraph: return "MissingGraph";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::NoOddCycle: return "NoOddCycle";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::SingularHessian: return "SingularHessian";
    case ErrorCode::NotNearCritical: return "NotNearCritical";
    case ErrorCode::MissingS: return "MissingS";
    case ErrorCode::UnmatchedEndpoint: return "UnmatchedEndpoint";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace mcland
