#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ndlomb {

// Every failure the library can report. The numeric value is stable; the CLI
// derives its process exit codes from it.
enum class ErrorCode : int {
  EmptyAfterFilter = 1,
  DimensionMismatch = 2,
  BadRange = 3,
  DegenerateDenominator = 4,
  SingularSystem = 5,
  ZeroVariance = 6,
  BadN = 7,
  ZeroResidual = 8,
  BadInput = 9,
  AllMissing = 10,
  Io = 11,
  Parse = 12,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::EmptyAfterFilter: return "EmptyAfterFilter";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::BadRange: return "BadRange";
  case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
  case ErrorCode::SingularSystem: return "SingularSystem";
  case ErrorCode::ZeroVariance: return "ZeroVariance";
  case ErrorCode::BadN: return "BadN";
  case ErrorCode::ZeroResidual: return "ZeroResidual";
  case ErrorCode::BadInput: return "BadInput";
  case ErrorCode::AllMissing: return "AllMissing";
  case ErrorCode::Io: return "Io";
  case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace ndlomb
