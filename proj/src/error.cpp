#include "ctqw/error.hpp"

namespace ctqw {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DuplicateCoordinate: return "DuplicateCoordinate";
    case ErrorCode::TargetNotInGraph: return "TargetNotInGraph";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::StepCountTooSmall: return "StepCountTooSmall";
    case ErrorCode::DivisionDomain: return "DivisionDomain";
    case ErrorCode::DegeneratePoints: return "DegeneratePoints";
    case ErrorCode::ZeroState: return "ZeroState";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ctqw
