#pragma once

#include <span>
#include <string>
#include <vector>

#include "shotseg/eval.hpp"
#include "shotseg/frame_repr.hpp"
#include "shotseg/ingest.hpp"
#include "shotseg/segmenter.hpp"

namespace shotseg {

struct Config {
  repr::ReprConfig repr;
  seg::SegmenterConfig segmenter;
  std::size_t tolerance = eval::kDefaultTolerance;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Enforces 2 <= k <= 64, gray levels in [2,256], distance >= 1, min_seg_len >= 1.
void validate(const Config& config);

// "0,45,90,135" -> orientation list.
std::vector<texture::Orientation> parse_orientations(const std::string& text);

struct StageTimings {
  double representation_seconds = 0.0;
  double segmentation_seconds = 0.0;
};

struct Detection {
  seg::Segmentation segmentation;
  std::vector<repr::RepresentativeMatrix> representatives;
  StageTimings timings;

  std::vector<std::size_t> transitions() const { return segmentation.transitions(); }
};

Detection detect_shots(std::span<const ingest::GrayFrame> frames, const Config& config);

namespace documents {

// {"total_frames":N,"shots":[{"start":s,"end":e},...],"transitions":[...]}
std::string shots_json(const seg::Segmentation& segmentation);

// Reads {"total_frames":N,"transitions":[...]}; validates the transition list.
eval::GroundTruth parse_transitions_json(const std::string& text);
std::string truth_json(const eval::GroundTruth& truth);

std::string report_json(const eval::EvalReport& report);

std::string features_csv_header();
std::string features_csv_rows(const repr::FrameFeatureMatrix& fm);

// [{"frame":n,"rm":[[...],...]}, ...]
std::string representatives_json(std::span<const repr::RepresentativeMatrix> rms);

// Applies keys present in a JSON config document on top of `base`.
Config config_from_json(const std::string& text, Config base);

}  // namespace documents

}  // namespace shotseg
