#pragma once

#include <stdexcept>
#include <string>

namespace shotseg {

enum class ErrorCode {
  // ingest
  MissingSignature,
  UnknownParameter,
  MissingParameter,
  BadParameter,
  UnsupportedChroma,
  MalformedFrameMarker,
  TruncatedFrame,
  UnreadableFile,
  UnsupportedBitDepth,
  UnsupportedFormat,
  NoFrames,
  // numerics
  InvalidArgument,
  NoCooccurringPairs,
  NonConvergence,
  NumericFailure,
  DimensionMismatch,
  EmptyClass,
  // segmentation
  TooFewFrames,
  MergeGuardExceeded,
  // documents
  InvalidJson,
  ValidationError,
  EmptySpec,
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

}  // namespace shotseg
