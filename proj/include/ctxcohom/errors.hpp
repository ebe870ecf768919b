#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctxcohom {

enum class ErrorCode {
  // scenario
  NotACover,
  NotAnAntichain,
  DisconnectedCover,
  DuplicateLabel,
  IndexOutOfRange,
  UnknownLabel,
  // empirical
  EmptyContextSupport,
  SignallingDetected,
  OutcomeOutOfRange,
  NotBeneathCover,
  GenerationFailed,
  // algebra
  DimensionMismatch,
  NotASublattice,
  SurjectivityViolated,
  NotACocycle,
  LiftFailed,
  UnknownOpen,
  // torsors
  NotASection,
  NonUniqueSolution,
  BaseMismatch,
  // cli
  ParseError,
  UnknownContext,
  SectionIndexOutOfRange,
  UnsupportedTopology,
  InvalidArgument,
  InternalAssertion,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// command-line front end can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised for broken invariants that valid inputs can never trigger.
[[noreturn]] inline void internal_assert_failed(const std::string& what) {
  throw Error(ErrorCode::InternalAssertion, what);
}

#define CTXCOHOM_ASSERT(cond, msg)                         \
  do {                                                     \
    if (!(cond)) ::ctxcohom::internal_assert_failed(msg);  \
  } while (0)

}  // namespace ctxcohom
