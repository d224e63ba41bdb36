#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "shotseg/fld.hpp"
#include "shotseg/linalg.hpp"

namespace shotseg::seg {

// Half-open frame range [start, end).
struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start; }
  bool operator==(const Segment&) const = default;
};

struct Segmentation {
  std::vector<Segment> segments;
  std::size_t total_frames = 0;

  // Start of every segment but the first.
  std::vector<std::size_t> transitions() const;
  bool operator==(const Segmentation&) const = default;
};

struct SegmenterConfig {
  std::size_t min_seg_len = 2;
  std::size_t merge_guard = 1000;
  fld::FldOptions fld;
};

struct SplitCandidate {
  std::size_t position = 0;
  double j = 0.0;
};

struct SplitDecision {
  bool accepted = false;
  std::size_t position = 0;
  Segment left;
  Segment right;
};

// Throws unless the segments tile [0, total_frames) with lengths >= min_len.
void check_tiling(const Segmentation& s, std::size_t min_len);

// Split-and-merge over a sequence of equally-shaped representative matrices.
// Not thread-safe: J evaluations share a per-instance summary cache.
class Segmenter {
 public:
  Segmenter(std::span<const linalg::Matrix> frames, SegmenterConfig config = {});

  std::size_t frame_count() const noexcept { return frames_.size(); }
  const SegmenterConfig& config() const noexcept { return config_; }

  double criterion(Segment a, Segment b) const;

  // Exhaustive argmax of J over admissible positions; smallest position on ties.
  std::optional<SplitCandidate> best_split(Segment s) const;

  SplitDecision try_split(Segment s, std::optional<Segment> left, std::optional<Segment> right) const;

  bool should_merge(Segment a, Segment b, std::optional<Segment> left, std::optional<Segment> right) const;

  Segmentation split_phase() const;
  Segmentation merge_phase(Segmentation s) const;
  Segmentation run() const;

 private:
  const fld::ClassSummary& summary(Segment s) const;

  std::span<const linalg::Matrix> frames_;
  SegmenterConfig config_;
  mutable std::map<std::pair<std::size_t, std::size_t>, fld::ClassSummary> cache_;
};

}  // namespace shotseg::seg
