#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace shotseg::eval {

struct GroundTruth {
  std::size_t total_frames = 0;
  std::vector<std::size_t> transitions;
};

// Throws ValidationError unless transitions are strictly increasing and inside (0, total_frames).
void validate(const GroundTruth& truth);

struct MatchCounts {
  std::size_t detected = 0;  // D
  std::size_t missed = 0;    // MD
  std::size_t false_alarms = 0;  // FA
  bool operator==(const MatchCounts&) const = default;
};

inline constexpr std::size_t kDefaultTolerance = 5;

// Greedy one-to-one matching in increasing order of detected boundaries.
MatchCounts match_boundaries(std::span<const std::size_t> detected, std::span<const std::size_t> truth,
                             std::size_t tolerance = kDefaultTolerance);

// Percentages in [0, 100]; 0/0 is defined as 0.
struct EvalReport {
  MatchCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

EvalReport score(const MatchCounts& counts);

// Value rounded to two decimals for display.
double display_round(double percent);

std::string format_table(const EvalReport& report);

}  // namespace shotseg::eval
