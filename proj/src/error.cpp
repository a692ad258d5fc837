#include "bll/error.hpp"

namespace bll {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::UnsupportedDim: return "UnsupportedDim";
    case ErrorCode::BadDescriptor: return "BadDescriptor";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::NonPositiveSpectrum: return "NonPositiveSpectrum";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::RangeTooSmall: return "RangeTooSmall";
    case ErrorCode::BadMode: return "BadMode";
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::SpectrumHit: return "SpectrumHit";
    case ErrorCode::BadQuery: return "BadQuery";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::XiTooLarge: return "XiTooLarge";
    case ErrorCode::BranchAmbiguous: return "BranchAmbiguous";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::HashMismatch: return "HashMismatch";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace bll
