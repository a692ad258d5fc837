#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bll {

enum class ErrorCode {
  GridTooSmall,
  UnsupportedDim,
  BadDescriptor,
  GridMismatch,
  SolveFailure,
  BadExponent,
  NonPositiveSpectrum,
  ConvergenceFailure,
  KTooLarge,
  RangeTooSmall,
  BadMode,
  NearSingular,
  SpectrumHit,
  BadQuery,
  ShapeMismatch,
  NotOrthogonal,
  XiTooLarge,
  BranchAmbiguous,
  RangeError,
  ConfigError,
  BadMagic,
  VersionMismatch,
  HashMismatch,
  Truncated,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bll
