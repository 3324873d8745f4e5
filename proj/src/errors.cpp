#include "errors.hpp"

namespace alab {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::ResolutionExceeded: return "ResolutionExceeded";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::ScaleBelowResolution: return "ScaleBelowResolution";
    case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::TruncationTooCoarse: return "TruncationTooCoarse";
    case ErrorCode::InvalidDilatation: return "InvalidDilatation";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SpectrumUndefined: return "SpectrumUndefined";
    case ErrorCode::ThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace alab
