#pragma once

#include <stdexcept>
#include <string>

namespace optigon {

enum class ErrorCode {
  TooSmallN,
  OddN,
  NonFinite,
  DiameterExceeded,
  DimensionMismatch,
  NonConvexConstraint,
  InfeasibleInitial,
  InvalidConfig,
  ParseError,
  Io,
};

const char* to_string(ErrorCode code);

/// Exception type for every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::TooSmallN: return "TooSmallN";
    case ErrorCode::OddN: return "OddN";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DiameterExceeded: return "DiameterExceeded";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonConvexConstraint: return "NonConvexConstraint";
    case ErrorCode::InfeasibleInitial: return "InfeasibleInitial";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace optigon
