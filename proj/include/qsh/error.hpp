#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsh {

enum class ErrorCode {
  NonOrthogonalUnits,
  UnknownScheme,
  OutOfDomain,
  TruncationBudgetExceeded,
  SingularDenominator,
  RangeViolation,
  EvaluationFailure,
  DivergentIntegral,
  ZeroSlice,
  NonMonotoneProfile,
  GapViolation,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library. The code identifies the failure
/// class so callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace qsh
