#pragma once

#include <stdexcept>
#include <string>

namespace qsd {

enum class ErrorCode {
  kInvalidArgument,
  kBasisMismatch,
  kNotHermitian,
  kNotUnitary,
  kCoefficientCount,
  kTooFewStates,
  kZeroCoefficient,
  kNotNormalized,
  kCoefficientOrdering,
  kLabelCollision,
  kOutsideSupport,
  kLinearlyDependent,
  kNotOrthogonal,
  kInfeasibleSchedule,
  kMissingAncilla,
  kInsufficientCutoff,
};

const char* to_string(ErrorCode code);

/// Raised for every contract violation in the library. `code` lets callers
/// (the CLI in particular) map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qsd
