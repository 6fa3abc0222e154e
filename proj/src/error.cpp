#include "mdframe/error.hpp"

namespace mdframe {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonCoprime: return "NonCoprime";
    case ErrorCode::ScaleOutOfRange: return "ScaleOutOfRange";
    case ErrorCode::DegenerateSetup: return "DegenerateSetup";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::GridMisaligned: return "GridMisaligned";
    case ErrorCode::UnitarityViolated: return "UnitarityViolated";
    case ErrorCode::DensityViolated: return "DensityViolated";
    case ErrorCode::TailNotConverged: return "TailNotConverged";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::NoMdDual: return "NoMdDual";
    case ErrorCode::TruncationNotConverged: return "TruncationNotConverged";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace mdframe
