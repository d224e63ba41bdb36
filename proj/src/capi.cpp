#include "shotseg/shotseg.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <utility>

#include "shotseg/error.hpp"
#include "shotseg/pipeline.hpp"
#include "shotseg/synth.hpp"

struct shotseg_video {
  std::vector<shotseg::ingest::GrayFrame> frames;
};

struct shotseg_detection {
  shotseg::Detection result;
};

namespace {

thread_local std::string last_error;

shotseg_status status_of(shotseg::ErrorCode code) {
  using shotseg::ErrorCode;
  switch (code) {
    case ErrorCode::MissingSignature:
    case ErrorCode::UnknownParameter:
    case ErrorCode::MissingParameter:
    case ErrorCode::BadParameter:
    case ErrorCode::UnsupportedChroma:
    case ErrorCode::MalformedFrameMarker:
    case ErrorCode::TruncatedFrame:
    case ErrorCode::UnsupportedBitDepth:
    case ErrorCode::UnsupportedFormat: return SHOTSEG_ERR_FORMAT;
    case ErrorCode::UnreadableFile: return SHOTSEG_ERR_IO;
    case ErrorCode::NoFrames: return SHOTSEG_ERR_NO_FRAMES;
    case ErrorCode::TooFewFrames: return SHOTSEG_ERR_TOO_FEW_FRAMES;
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::EmptyClass: return SHOTSEG_ERR_INVALID_ARGUMENT;
    case ErrorCode::NoCooccurringPairs:
    case ErrorCode::NonConvergence:
    case ErrorCode::NumericFailure:
    case ErrorCode::MergeGuardExceeded: return SHOTSEG_ERR_NUMERIC;
    case ErrorCode::InvalidJson: return SHOTSEG_ERR_JSON;
    case ErrorCode::ValidationError:
    case ErrorCode::EmptySpec: return SHOTSEG_ERR_VALIDATION;
  }
  return SHOTSEG_ERR_INTERNAL;
}

shotseg_status fail(shotseg_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class F>
shotseg_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const shotseg::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SHOTSEG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SHOTSEG_ERR_INTERNAL, e.what());
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

shotseg::Config to_config(const shotseg_config& c) {
  using shotseg::texture::Orientation;
  shotseg::Config cfg;
  cfg.repr.clusters = c.k;
  cfg.repr.texture.gray_levels = c.gray_levels;
  cfg.repr.texture.distance = c.distance;
  cfg.repr.texture.orientations.clear();
  const std::pair<unsigned, Orientation> bits[] = {{SHOTSEG_ORIENT_0, Orientation::Deg0},
                                                   {SHOTSEG_ORIENT_45, Orientation::Deg45},
                                                   {SHOTSEG_ORIENT_90, Orientation::Deg90},
                                                   {SHOTSEG_ORIENT_135, Orientation::Deg135}};
  for (const auto& [bit, o] : bits)
    if (c.orientation_mask & bit) cfg.repr.texture.orientations.push_back(o);
  cfg.repr.seed = c.seed;
  cfg.segmenter.min_seg_len = c.min_seg_len;
  cfg.tolerance = c.tolerance;
  cfg.threads = c.threads;
  return cfg;
}

void from_config(const shotseg::Config& cfg, shotseg_config& c) {
  c.k = cfg.repr.clusters;
  c.gray_levels = cfg.repr.texture.gray_levels;
  c.distance = cfg.repr.texture.distance;
  c.orientation_mask = 0;
  for (auto o : cfg.repr.texture.orientations) c.orientation_mask |= 1u << shotseg::texture::orientation_degrees(o) / 45;
  c.seed = cfg.repr.seed;
  c.min_seg_len = cfg.segmenter.min_seg_len;
  c.tolerance = cfg.tolerance;
  c.threads = cfg.threads;
}

}  // namespace

extern "C" {

SHOTSEG_API const char* shotseg_status_name(shotseg_status status) {
  switch (status) {
    case SHOTSEG_OK: return "ok";
    case SHOTSEG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SHOTSEG_ERR_IO: return "unreadable input";
    case SHOTSEG_ERR_FORMAT: return "malformed input";
    case SHOTSEG_ERR_NO_FRAMES: return "no frames";
    case SHOTSEG_ERR_TOO_FEW_FRAMES: return "too few frames";
    case SHOTSEG_ERR_JSON: return "malformed JSON";
    case SHOTSEG_ERR_VALIDATION: return "validation error";
    case SHOTSEG_ERR_NUMERIC: return "numeric failure";
    case SHOTSEG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

SHOTSEG_API const char* shotseg_last_error(void) { return last_error.c_str(); }

SHOTSEG_API void shotseg_string_free(char* text) { std::free(text); }

SHOTSEG_API void shotseg_config_default(shotseg_config* config) {
  if (config) from_config(shotseg::Config{}, *config);
}

SHOTSEG_API shotseg_status shotseg_config_merge_json(shotseg_config* config, const char* json_text) {
  if (!config || !json_text) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    from_config(shotseg::documents::config_from_json(json_text, to_config(*config)), *config);
    return SHOTSEG_OK;
  });
}

SHOTSEG_API shotseg_status shotseg_config_set_orientations(shotseg_config* config, const char* list) {
  if (!config || !list) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto cfg = to_config(*config);
    cfg.repr.texture.orientations = shotseg::parse_orientations(list);
    from_config(cfg, *config);
    return SHOTSEG_OK;
  });
}

SHOTSEG_API shotseg_status shotseg_config_validate(const shotseg_config* config) {
  if (!config) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    shotseg::validate(to_config(*config));
    return SHOTSEG_OK;
  });
}

SHOTSEG_API shotseg_status shotseg_video_open(const char* input, shotseg_video** out) {
  if (!input || !out) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto frames = shotseg::ingest::load_video(input);
    if (frames.empty()) return fail(SHOTSEG_ERR_NO_FRAMES, std::string("'") + input + "' contains no frames");
    *out = new shotseg_video{std::move(frames)};
    return SHOTSEG_OK;
  });
}

SHOTSEG_API size_t shotseg_video_frame_count(const shotseg_video* video) { return video ? video->frames.size() : 0; }

SHOTSEG_API shotseg_status shotseg_video_frame(const shotseg_video* video, size_t index, uint8_t* pixels) {
  if (!video || !pixels) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  if (index >= video->frames.size()) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "frame index out of range");
  const auto px = video->frames[index].pixels();
  std::memcpy(pixels, px.data(), px.size());
  return SHOTSEG_OK;
}

SHOTSEG_API void shotseg_video_free(shotseg_video* video) { delete video; }

SHOTSEG_API shotseg_status shotseg_detect(const shotseg_video* video, const shotseg_config* config,
                                          shotseg_detection** out) {
  if (!video || !config || !out) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new shotseg_detection{shotseg::detect_shots(video->frames, to_config(*config))};
    return SHOTSEG_OK;
  });
}

SHOTSEG_API size_t shotseg_detection_shot_count(const shotseg_detection* detection) {
  return detection ? detection->result.segmentation.segments.size() : 0;
}

SHOTSEG_API shotseg_status shotseg_detection_shot(const shotseg_detection* detection, size_t index, size_t* start,
                                                  size_t* end) {
  if (!detection || !start || !end) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  const auto& segs = detection->result.segmentation.segments;
  if (index >= segs.size()) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "shot index out of range");
  *start = segs[index].start;
  *end = segs[index].end;
  return SHOTSEG_OK;
}

SHOTSEG_API size_t shotseg_detection_transition_count(const shotseg_detection* detection) {
  const size_t shots = shotseg_detection_shot_count(detection);
  return shots ? shots - 1 : 0;
}

SHOTSEG_API shotseg_status shotseg_detection_transition(const shotseg_detection* detection, size_t index,
                                                        size_t* frame) {
  if (!detection || !frame) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  const auto& segs = detection->result.segmentation.segments;
  if (index + 1 >= segs.size()) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "transition index out of range");
  *frame = segs[index + 1].start;
  return SHOTSEG_OK;
}

SHOTSEG_API double shotseg_detection_stage_seconds(const shotseg_detection* detection, shotseg_stage stage) {
  if (!detection) return 0.0;
  return stage == SHOTSEG_STAGE_REPRESENTATION ? detection->result.timings.representation_seconds
                                               : detection->result.timings.segmentation_seconds;
}

SHOTSEG_API shotseg_status shotseg_detection_shots_json(const shotseg_detection* detection, char** out) {
  if (!detection || !out) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = duplicate(shotseg::documents::shots_json(detection->result.segmentation));
    return SHOTSEG_OK;
  });
}

SHOTSEG_API shotseg_status shotseg_detection_representatives_json(const shotseg_detection* detection, char** out) {
  if (!detection || !out) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = duplicate(shotseg::documents::representatives_json(detection->result.representatives));
    return SHOTSEG_OK;
  });
}

SHOTSEG_API void shotseg_detection_free(shotseg_detection* detection) { delete detection; }

SHOTSEG_API shotseg_status shotseg_features_csv(const shotseg_video* video, const shotseg_config* config, char** out) {
  if (!video || !config || !out) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto cfg = to_config(*config);
    shotseg::validate(cfg);
    std::string csv = shotseg::documents::features_csv_header();
    for (const auto& frame : video->frames) {
      csv += shotseg::documents::features_csv_rows(shotseg::repr::frame_feature_matrix(frame, cfg.repr.texture));
    }
    *out = duplicate(csv);
    return SHOTSEG_OK;
  });
}

SHOTSEG_API shotseg_status shotseg_evaluate_json(const char* detected_json, const char* truth_json, size_t tolerance,
                                                 shotseg_report* out) {
  if (!detected_json || !truth_json || !out) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto detected = shotseg::documents::parse_transitions_json(detected_json);
    const auto truth = shotseg::documents::parse_transitions_json(truth_json);
    if (detected.total_frames != truth.total_frames) {
      return fail(SHOTSEG_ERR_VALIDATION, "total_frames differs between detection (" +
                                              std::to_string(detected.total_frames) + ") and ground truth (" +
                                              std::to_string(truth.total_frames) + ")");
    }
    const auto report =
        shotseg::eval::score(shotseg::eval::match_boundaries(detected.transitions, truth.transitions, tolerance));
    *out = {report.counts.detected, report.counts.missed,  report.counts.false_alarms,
            report.precision,       report.recall,         report.f_measure};
    return SHOTSEG_OK;
  });
}

namespace {
shotseg::eval::EvalReport to_report(const shotseg_report& r) {
  return {{r.detected, r.missed, r.false_alarms}, r.precision, r.recall, r.f_measure};
}
}  // namespace

SHOTSEG_API shotseg_status shotseg_report_json(const shotseg_report* report, char** out) {
  if (!report || !out) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = duplicate(shotseg::documents::report_json(to_report(*report)));
    return SHOTSEG_OK;
  });
}

SHOTSEG_API shotseg_status shotseg_report_table(const shotseg_report* report, char** out) {
  if (!report || !out) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = duplicate(shotseg::eval::format_table(to_report(*report)));
    return SHOTSEG_OK;
  });
}

SHOTSEG_API shotseg_status shotseg_synth(const char* spec_json, const char* y4m_path, char** truth_json) {
  if (!spec_json || !y4m_path || !truth_json) return fail(SHOTSEG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto spec = shotseg::synth::parse_spec(spec_json);
    const auto truth = shotseg::synth::write_video(spec, std::filesystem::path(y4m_path));
    *truth_json = duplicate(shotseg::documents::truth_json(truth));
    return SHOTSEG_OK;
  });
}

}  // extern "C"
