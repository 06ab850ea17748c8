#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csf {

enum class ErrorCode {
  DegenerateCurve,
  BoundaryNotOnAxis,
  NotGraphical,
  DomainError,
  Extinct,
  InvalidConfig,
  TimeTooLate,
  BarrierTooWide,
  StepTooLarge,
  SolverSingular,
  NonConvergent,
  DomainMismatch,
  NotClosed,
  CollinearInput,
  InvalidInput,
  IOError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace csf
