#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tempcorr {

enum class ErrorCode {
  NonHermitianInput,
  InvalidSharpness,
  ZeroProbabilityBranch,
  NegativeRate,
  StepCountTooSmall,
  DimensionMismatch,
  NonDichotomic,
  ArityMismatch,
  InvalidDimension,
  InvalidState,
  InvalidEffect,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (scan drivers, the CLI) can branch on the kind without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tempcorr
