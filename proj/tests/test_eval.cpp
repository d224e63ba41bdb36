#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "shotseg/error.hpp"
#include "shotseg/eval.hpp"

using namespace shotseg;
using namespace shotseg::eval;

namespace {

using V = std::vector<std::size_t>;

struct ReferenceRow {
  const char* name;
  std::size_t d, md, fa;
  double p, r, f;
};

// Reference rows: counts with their two-decimal percentages.
constexpr ReferenceRow kTable[] = {
    {"row 1", 3, 2, 0, 100, 60, 75},
    {"row 2", 3, 0, 0, 100, 100, 100},
    {"row 3", 5, 1, 2, 71.42, 83.33, 76.91},
    {"row 4", 4, 2, 3, 57.14, 66.66, 61.53},
};

}  // namespace

TEST_CASE("boundary matching") {
  CHECK(match_boundaries(V{10, 50}, V{10, 50}) == MatchCounts{2, 0, 0});
  CHECK(match_boundaries(V{}, V{50}) == MatchCounts{0, 1, 0});
  CHECK(match_boundaries(V{48, 200}, V{50}, 5) == MatchCounts{1, 0, 1});
  CHECK(match_boundaries(V{44}, V{50}, 5) == MatchCounts{0, 1, 1});
  CHECK(match_boundaries(V{45}, V{50}, 5) == MatchCounts{1, 0, 0});
  // One truth boundary absorbs only one detection.
  CHECK(match_boundaries(V{49, 51}, V{50}, 5) == MatchCounts{1, 0, 1});
  // Nearest wins; equal distance goes to the earlier truth boundary.
  CHECK(match_boundaries(V{52}, V{50, 54}, 5) == MatchCounts{1, 1, 0});
  CHECK(match_boundaries(V{20, 52}, V{50, 54}, 5) == MatchCounts{1, 1, 1});
  CHECK(match_boundaries(V{49, 53}, V{50, 54}, 5) == MatchCounts{2, 0, 0});
  CHECK(match_boundaries(V{53, 56}, V{50, 54}, 5) == MatchCounts{1, 1, 1});
}

TEST_CASE("swapping lists swaps misses and false alarms") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    // Boundaries spaced further apart than twice the tolerance, so nearest matches are unambiguous.
    std::set<std::size_t> a, b;
    for (std::size_t slot = 0; slot < 30; ++slot) {
      const std::size_t centre = 20 + slot * 20;
      const auto jitter = [&] { return centre + rng() % 9 - 4; };
      const auto roll = rng() % 4;
      if (roll == 0 || roll == 2) a.insert(jitter());
      if (roll == 1 || roll == 2) b.insert(jitter());
    }
    const V da(a.begin(), a.end()), db(b.begin(), b.end());
    const auto ab = match_boundaries(da, db, 5), ba = match_boundaries(db, da, 5);
    CHECK(ab.detected == ba.detected);
    CHECK(ab.missed == ba.false_alarms);
    CHECK(ab.false_alarms == ba.missed);
    CHECK(ab.detected + ab.missed == db.size());
    CHECK(ab.detected + ab.false_alarms == da.size());
  }
}

TEST_CASE("scores reproduce the reference rows") {
  double sp = 0, sr = 0, sf = 0;
  for (const auto& row : kTable) {
    INFO(row.name);
    const auto r = score({row.d, row.md, row.fa});
    CHECK(std::abs(r.precision - row.p) <= 0.02);
    CHECK(std::abs(r.recall - row.r) <= 0.02);
    CHECK(std::abs(r.f_measure - row.f) <= 0.02);
    sp += r.precision;
    sr += r.recall;
    sf += r.f_measure;
  }
  CHECK(std::abs(sp / 4 - 82.14) <= 0.01);
  CHECK(std::abs(sr / 4 - 77.4975) <= 0.01);
  CHECK(std::abs(sf / 4 - 78.36) <= 0.01);

  const auto partial = score({3, 2, 0});
  CHECK(partial.precision == 100.0);
  CHECK(partial.recall == 60.0);
  CHECK(partial.f_measure == doctest::Approx(75.0).epsilon(1e-14));
  CHECK(display_round(score({4, 2, 3}).precision) == 57.14);
}

TEST_CASE("degenerate and bounded scores") {
  const auto zero = score({0, 0, 0});
  CHECK(zero.precision == 0.0);
  CHECK(zero.recall == 0.0);
  CHECK(zero.f_measure == 0.0);
  const auto miss = score({0, 3, 2});
  CHECK(miss.f_measure == 0.0);
  for (std::size_t d = 0; d < 6; ++d)
    for (std::size_t md = 0; md < 6; ++md)
      for (std::size_t fa = 0; fa < 6; ++fa) {
        const auto r = score({d, md, fa});
        CHECK(r.precision >= 0.0);
        CHECK(r.precision <= 100.0);
        CHECK(r.recall <= 100.0);
        if (r.precision + r.recall > 0) {
          CHECK(r.f_measure <= std::max(r.precision, r.recall) + 1e-12);
          CHECK(r.f_measure >= std::min(r.precision, r.recall) - 1e-12);
        }
      }
}

TEST_CASE("table formatting") {
  const auto text = format_table(score({4, 2, 3}));
  CHECK(text.find("57.14") != std::string::npos);
  CHECK(text.find("66.67") != std::string::npos);
  CHECK(text.find("61.54") != std::string::npos);
}

TEST_CASE("ground truth validation") {
  CHECK_NOTHROW(validate({100, {10, 50, 99}}));
  CHECK_NOTHROW(validate({100, {}}));
  CHECK_THROWS_AS(validate({100, {100}}), Error);
  CHECK_THROWS_AS(validate({100, {0}}), Error);
  CHECK_THROWS_AS(validate({100, {30, 30}}), Error);
  CHECK_THROWS_AS(validate({100, {40, 30}}), Error);
}
