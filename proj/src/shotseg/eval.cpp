#include "shotseg/eval.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "shotseg/error.hpp"

namespace shotseg::eval {

void validate(const GroundTruth& truth) {
  std::size_t previous = 0;
  for (std::size_t t : truth.transitions) {
    if (t == 0 || t >= truth.total_frames) {
      throw Error(ErrorCode::ValidationError, "transition " + std::to_string(t) + " lies outside (0, " +
                                                  std::to_string(truth.total_frames) + ")");
    }
    if (t <= previous) throw Error(ErrorCode::ValidationError, "transitions must be strictly increasing");
    previous = t;
  }
}

MatchCounts match_boundaries(std::span<const std::size_t> detected, std::span<const std::size_t> truth,
                             std::size_t tolerance) {
  std::vector<bool> used(truth.size(), false);
  MatchCounts counts;
  for (std::size_t d : detected) {
    std::size_t best = truth.size();
    std::size_t best_gap = 0;
    for (std::size_t t = 0; t < truth.size(); ++t) {
      if (used[t]) continue;
      const std::size_t gap = d > truth[t] ? d - truth[t] : truth[t] - d;
      if (gap <= tolerance && (best == truth.size() || gap < best_gap)) {
        best = t;
        best_gap = gap;
      }
    }
    if (best < truth.size()) {
      used[best] = true;
      ++counts.detected;
    } else {
      ++counts.false_alarms;
    }
  }
  counts.missed = truth.size() - counts.detected;
  return counts;
}

EvalReport score(const MatchCounts& counts) {
  EvalReport r;
  r.counts = counts;
  const auto d = static_cast<double>(counts.detected);
  const auto fa = static_cast<double>(counts.false_alarms);
  const auto md = static_cast<double>(counts.missed);
  r.precision = d + fa > 0 ? 100.0 * d / (d + fa) : 0.0;
  r.recall = d + md > 0 ? 100.0 * d / (d + md) : 0.0;
  r.f_measure = r.precision + r.recall > 0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

double display_round(double percent) { return std::round(percent * 100.0) / 100.0; }

std::string format_table(const EvalReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%6s %6s %6s %10s %10s %10s\n%6zu %6zu %6zu %10.2f %10.2f %10.2f\n", "D", "MD", "FA", "P(%)", "R(%)",
                "F(%)", report.counts.detected, report.counts.missed, report.counts.false_alarms,
                display_round(report.precision), display_round(report.recall), display_round(report.f_measure));
  return buf;
}

}  // namespace shotseg::eval
