#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swingnam {

enum class ErrorCode {
  // input / validation
  MalformedFile,
  SchemaViolation,
  DuplicateSwingId,
  UnknownClubType,
  InvariantViolation,
  MissingMetric,
  DimensionMismatch,
  LengthMismatch,
  IndexOutOfRange,
  InvalidArgument,
  VersionMismatch,
  CorruptFile,
  // geometry / numerics
  DegenerateBBox,
  DegenerateAngle,
  DegenerateSegment,
  DegenerateStride,
  DegenerateLabels,
  EmptyDataset,
  ZeroVariance,
  SingularSystem,
  NonFinite,
  NoFeasibleRegion,
  // environment
  IoError,
};

inline std::string_view to_string(ErrorCode code) noexcept;

// Process exit status for a failure of this kind: 1 I/O, 2 validation, 3 numeric.
inline int exit_code_for(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DuplicateSwingId: return "DuplicateSwingId";
    case ErrorCode::UnknownClubType: return "UnknownClubType";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::MissingMetric: return "MissingMetric";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::DegenerateBBox: return "DegenerateBBox";
    case ErrorCode::DegenerateAngle: return "DegenerateAngle";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::DegenerateStride: return "DegenerateStride";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoFeasibleRegion: return "NoFeasibleRegion";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Per-swing pose geometry that cannot be measured.
inline bool is_degenerate_pose(ErrorCode code) noexcept {
  return code == ErrorCode::DegenerateBBox || code == ErrorCode::DegenerateStride ||
         code == ErrorCode::DegenerateAngle || code == ErrorCode::DegenerateSegment;
}

inline int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IoError:
      return 1;
    case ErrorCode::DegenerateAngle:
    case ErrorCode::DegenerateSegment:
    case ErrorCode::DegenerateLabels:
    case ErrorCode::ZeroVariance:
    case ErrorCode::SingularSystem:
    case ErrorCode::NonFinite:
    case ErrorCode::NoFeasibleRegion:
      return 3;
    default:
      return 2;
  }
}

}  // namespace swingnam
