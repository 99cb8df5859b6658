#pragma once

#include <stdexcept>
#include <string>

namespace ctqw {

enum class ErrorCode {
  InvalidArgument = 1,
  DuplicateCoordinate,
  TargetNotInGraph,
  TargetOutOfRange,
  NotSymmetric,
  ConvergenceFailure,
  NonFinite,
  StepCountTooSmall,
  DivisionDomain,
  DegeneratePoints,
  ZeroState,
  EmptyGraph,
  NegativeProbability,
  Io,
};

const char* to_string(ErrorCode code);

// Single exception type for the core; the C layer maps `code()` onto status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ctqw
