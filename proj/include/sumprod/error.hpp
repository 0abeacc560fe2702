#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sumprod {

enum class errc {
  empty_set,
  division_by_zero,
  too_small,
  invalid_exponent,
  zero_element,
  bad_threshold,
  bad_eps,
  hypothesis_failed,
  side_condition_failed,
  non_positive,
  bad_n,
  bad_k,
  same_slope,
  degenerate_slopes,
  scale_too_large,
  layer_too_thin,
  bad_params,
  duplicate_elements,
  invalid_elimination,
  parse_error,
  gate_violation,
};

constexpr std::string_view to_string(errc code) {
  switch (code) {
    case errc::empty_set: return "EmptySet";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::too_small: return "TooSmall";
    case errc::invalid_exponent: return "InvalidExponent";
    case errc::zero_element: return "ZeroElement";
    case errc::bad_threshold: return "BadThreshold";
    case errc::bad_eps: return "BadEps";
    case errc::hypothesis_failed: return "HypothesisFailed";
    case errc::side_condition_failed: return "SideConditionFailed";
    case errc::non_positive: return "NonPositive";
    case errc::bad_n: return "BadN";
    case errc::bad_k: return "BadK";
    case errc::same_slope: return "SameSlope";
    case errc::degenerate_slopes: return "DegenerateSlopes";
    case errc::scale_too_large: return "ScaleTooLarge";
    case errc::layer_too_thin: return "LayerTooThin";
    case errc::bad_params: return "BadParams";
    case errc::duplicate_elements: return "DuplicateElements";
    case errc::invalid_elimination: return "InvalidElimination";
    case errc::parse_error: return "ParseError";
    case errc::gate_violation: return "GateViolation";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this exception; `code()` names
/// the condition, `what()` carries the human-readable detail (for example the
/// witness element of a failed hypothesis).
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& detail) { throw error(code, detail); }

}  // namespace sumprod
