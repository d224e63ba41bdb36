#include "shotseg/error.hpp"

namespace shotseg {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingSignature: return "missing_signature";
    case ErrorCode::UnknownParameter: return "unknown_parameter";
    case ErrorCode::MissingParameter: return "missing_parameter";
    case ErrorCode::BadParameter: return "bad_parameter";
    case ErrorCode::UnsupportedChroma: return "unsupported_chroma";
    case ErrorCode::MalformedFrameMarker: return "malformed_frame_marker";
    case ErrorCode::TruncatedFrame: return "truncated_frame";
    case ErrorCode::UnreadableFile: return "unreadable_file";
    case ErrorCode::UnsupportedBitDepth: return "unsupported_bit_depth";
    case ErrorCode::UnsupportedFormat: return "unsupported_format";
    case ErrorCode::NoFrames: return "no_frames";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::NoCooccurringPairs: return "no_cooccurring_pairs";
    case ErrorCode::NonConvergence: return "non_convergence";
    case ErrorCode::NumericFailure: return "numeric_failure";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::EmptyClass: return "empty_class";
    case ErrorCode::TooFewFrames: return "too_few_frames";
    case ErrorCode::MergeGuardExceeded: return "merge_guard_exceeded";
    case ErrorCode::InvalidJson: return "invalid_json";
    case ErrorCode::ValidationError: return "validation_error";
    case ErrorCode::EmptySpec: return "empty_spec";
  }
  return "unknown";
}

}  // namespace shotseg
