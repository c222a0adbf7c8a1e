#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsq {

enum class ErrorCode {
  non_hermitian_input,
  dimension_mismatch,
  invalid_argument,
  precondition_violated,
  divergence_detected,
  no_convergence,
  unstable_regime,
  asymmetric_params,
  feedback_unstable,
  not_stabilizable,
  consistency_failure,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::non_hermitian_input: return "NonHermitianInput";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::precondition_violated: return "PreconditionViolated";
    case ErrorCode::divergence_detected: return "DivergenceDetected";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::unstable_regime: return "UnstableRegime";
    case ErrorCode::asymmetric_params: return "AsymmetricParams";
    case ErrorCode::feedback_unstable: return "FeedbackUnstable";
    case ErrorCode::not_stabilizable: return "NotStabilizable";
    case ErrorCode::consistency_failure: return "ConsistencyFailure";
  }
  return "Unknown";
}

/// Numerical failures (divergence, non-convergence, instability) as opposed to
/// malformed input.
constexpr bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::divergence_detected:
    case ErrorCode::no_convergence:
    case ErrorCode::unstable_regime:
    case ErrorCode::feedback_unstable:
    case ErrorCode::not_stabilizable:
    case ErrorCode::consistency_failure:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace gsq
