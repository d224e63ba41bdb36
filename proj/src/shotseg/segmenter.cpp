#include "shotseg/segmenter.hpp"

#include <algorithm>
#include <string>

#include "shotseg/error.hpp"

namespace shotseg::seg {

std::vector<std::size_t> Segmentation::transitions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < segments.size(); ++i) out.push_back(segments[i].start);
  return out;
}

void check_tiling(const Segmentation& s, std::size_t min_len) {
  std::size_t cursor = 0;
  for (const Segment& seg : s.segments) {
    if (seg.start != cursor || seg.end <= seg.start || seg.length() < min_len) {
      throw Error(ErrorCode::NumericFailure, "segmentation does not tile the frame range");
    }
    cursor = seg.end;
  }
  if (cursor != s.total_frames) throw Error(ErrorCode::NumericFailure, "segmentation does not cover every frame");
}

Segmenter::Segmenter(std::span<const linalg::Matrix> frames, SegmenterConfig config)
    : frames_(frames), config_(config) {
  if (config_.min_seg_len < 1) throw Error(ErrorCode::InvalidArgument, "min_seg_len must be at least 1");
}

const fld::ClassSummary& Segmenter::summary(Segment s) const {
  auto key = std::make_pair(s.start, s.end);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(key, fld::ClassSummary(frames_.subspan(s.start, s.length()))).first;
  }
  return it->second;
}

double Segmenter::criterion(Segment a, Segment b) const {
  return fld::criterion_J(summary(a), summary(b), config_.fld).j;
}

std::optional<SplitCandidate> Segmenter::best_split(Segment s) const {
  const std::size_t m = config_.min_seg_len;
  if (s.length() < 2 * m) return std::nullopt;
  const std::size_t first = s.start + m, last = s.end - m;

  // suffix[p - first] summarizes [p, end).
  std::vector<fld::ClassSummary> suffix(last - first + 1);
  fld::ClassSummary running;
  for (std::size_t p = s.end; p-- > first;) {
    running.add(frames_[p]);
    if (p <= last) suffix[p - first] = running;
  }

  fld::ClassSummary left;
  for (std::size_t p = s.start; p < first; ++p) left.add(frames_[p]);
  std::optional<SplitCandidate> best;
  for (std::size_t p = first; p <= last; ++p) {
    if (p > first) left.add(frames_[p - 1]);
    const double j = fld::criterion_J(left, suffix[p - first], config_.fld).j;
    if (!best || j > best->j) best = SplitCandidate{p, j};
  }
  return best;
}

SplitDecision Segmenter::try_split(Segment s, std::optional<Segment> left, std::optional<Segment> right) const {
  SplitDecision d;
  const auto candidate = best_split(s);
  if (!candidate) return d;
  d.position = candidate->position;
  d.left = {s.start, candidate->position};
  d.right = {candidate->position, s.end};
  const bool left_ok = !left || criterion(*left, d.left) > criterion(*left, s);
  const bool right_ok = !right || criterion(d.right, *right) > criterion(s, *right);
  d.accepted = left_ok && right_ok;
  return d;
}

bool Segmenter::should_merge(Segment a, Segment b, std::optional<Segment> left, std::optional<Segment> right) const {
  const Segment merged{a.start, b.end};
  if (!left && !right) {
    // The pair spans the whole video: keep the boundary only if it separates
    // better than the best split inside either half.
    double internal = 0.0;
    for (Segment part : {a, b})
      if (auto c = best_split(part)) internal = std::max(internal, c->j);
    return criterion(a, b) <= internal;
  }
  const bool left_ok = !left || criterion(*left, a) <= criterion(*left, merged);
  const bool right_ok = !right || criterion(b, *right) <= criterion(merged, *right);
  return left_ok && right_ok;
}

Segmentation Segmenter::split_phase() const {
  const std::size_t n = frames_.size();
  if (n < config_.min_seg_len || n == 0) {
    throw Error(ErrorCode::TooFewFrames, "video has " + std::to_string(n) + " frames, fewer than min_seg_len " +
                                             std::to_string(config_.min_seg_len));
  }
  Segmentation out{{Segment{0, n}}, n};
  std::vector<bool> pending{true};
  for (;;) {
    const auto it = std::find(pending.begin(), pending.end(), true);
    if (it == pending.end()) break;
    const auto i = static_cast<std::size_t>(it - pending.begin());
    const auto& segs = out.segments;
    const std::optional<Segment> left = i > 0 ? std::optional(segs[i - 1]) : std::nullopt;
    const std::optional<Segment> right = i + 1 < segs.size() ? std::optional(segs[i + 1]) : std::nullopt;
    const SplitDecision d = try_split(segs[i], left, right);
    if (!d.accepted) {
      pending[i] = false;
      continue;
    }
    out.segments[i] = d.left;
    out.segments.insert(out.segments.begin() + static_cast<std::ptrdiff_t>(i) + 1, d.right);
    pending.insert(pending.begin() + static_cast<std::ptrdiff_t>(i) + 1, true);
    check_tiling(out, config_.min_seg_len);
  }
  return out;
}

Segmentation Segmenter::merge_phase(Segmentation s) const {
  check_tiling(s, config_.min_seg_len);
  std::size_t merges = 0;
  bool merged_in_sweep = true;
  while (merged_in_sweep) {
    merged_in_sweep = false;
    auto& segs = s.segments;
    std::size_t i = 0;
    while (i + 1 < segs.size()) {
      const std::optional<Segment> left = i > 0 ? std::optional(segs[i - 1]) : std::nullopt;
      const std::optional<Segment> right = i + 2 < segs.size() ? std::optional(segs[i + 2]) : std::nullopt;
      if (!should_merge(segs[i], segs[i + 1], left, right)) {
        ++i;
        continue;
      }
      if (++merges > config_.merge_guard) {
        throw Error(ErrorCode::MergeGuardExceeded,
                    "merge phase exceeded " + std::to_string(config_.merge_guard) + " merges");
      }
      segs[i].end = segs[i + 1].end;
      segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      check_tiling(s, config_.min_seg_len);
      merged_in_sweep = true;
      if (i > 0) --i;
    }
  }
  return s;
}

Segmentation Segmenter::run() const { return merge_phase(split_phase()); }

}  // namespace shotseg::seg
