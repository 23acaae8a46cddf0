#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace locc {

enum class ErrorCode {
  NotHermitian,
  NotPsd,
  NoConvergence,
  DimensionMismatch,
  NumericalDegeneracy,
  LabelOutOfRange,
  ConvergenceFailure,
  CapExceeded,
  InvalidInput,
};

std::string_view to_string(ErrorCode code) noexcept;

// Numerical failures (as opposed to malformed input) are reported by the CLI
// with a distinct exit status.
constexpr bool is_numerical(ErrorCode code) noexcept {
  return code == ErrorCode::NoConvergence || code == ErrorCode::NumericalDegeneracy ||
         code == ErrorCode::ConvergenceFailure || code == ErrorCode::NotPsd;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace locc
