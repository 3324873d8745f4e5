#pragma once

#include <stdexcept>
#include <string>

namespace alab {

enum class ErrorCode {
  InvalidArgument = 1,
  EmptySet,
  ResolutionExceeded,
  LevelOutOfRange,
  ScaleBelowResolution,
  WindowTooNarrow,
  InvalidParameter,
  TruncationTooCoarse,
  InvalidDilatation,
  PoleProximity,
  DimensionMismatch,
  SpectrumUndefined,
  ThetaOutOfRange,
  Parse,
  Io,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace alab
