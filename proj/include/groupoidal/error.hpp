#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace groupoidal {

enum class ErrorCode {
  DimensionMismatch,
  CompositionNonzero,
  BadModulus,
  NoSolution,
  DegreeTooLarge,
  InvalidGroupoid,
  InvalidModule,
  InvalidFunctor,
  NotAPermutation,
  DepthTooLarge,
  InvalidCocycle,
  WindowTooLarge,
  GuardTooSmall,
  StageBoundExceeded,
  MalformedDiagram,
  NotAGroup,
  NotSurjective,
  NotAnAction,
  ParseError,
  ValidationError,
  UnknownCommand,
  BadFlag,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CompositionNonzero: return "CompositionNonzero";
    case ErrorCode::BadModulus: return "BadModulus";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::InvalidGroupoid: return "InvalidGroupoid";
    case ErrorCode::InvalidModule: return "InvalidModule";
    case ErrorCode::InvalidFunctor: return "InvalidFunctor";
    case ErrorCode::NotAPermutation: return "NotAPermutation";
    case ErrorCode::DepthTooLarge: return "DepthTooLarge";
    case ErrorCode::InvalidCocycle: return "InvalidCocycle";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::GuardTooSmall: return "GuardTooSmall";
    case ErrorCode::StageBoundExceeded: return "StageBoundExceeded";
    case ErrorCode::MalformedDiagram: return "MalformedDiagram";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::NotAnAction: return "NotAnAction";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::BadFlag: return "BadFlag";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace groupoidal
