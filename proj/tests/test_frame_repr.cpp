#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "shotseg/error.hpp"
#include "shotseg/frame_repr.hpp"

using namespace shotseg;
using namespace shotseg::repr;
using linalg::Matrix;

namespace {

ingest::GrayFrame make_frame(std::size_t index, auto&& pixel) {
  std::vector<std::uint8_t> px(ingest::kFramePixels);
  for (int r = 0; r < 256; ++r)
    for (int c = 0; c < 256; ++c) px[static_cast<std::size_t>(r) * 256 + c] = static_cast<std::uint8_t>(pixel(r, c));
  return ingest::GrayFrame(index, std::move(px));
}

std::set<std::vector<double>> distinct_rows(const Matrix& m) {
  std::set<std::vector<double>> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) rows.emplace(m.row(r).begin(), m.row(r).end());
  return rows;
}

Matrix block_diagonal_affinity(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> within(0.5, 1.0), cross(0.0, 1e-6);
  Matrix w(64, 64);
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = i + 1; j < 64; ++j) w(i, j) = w(j, i) = ((i < 32) == (j < 32)) ? within(rng) : cross(rng);
  return w;
}

FrameFeatureMatrix two_valued_fm() {
  FrameFeatureMatrix fm;
  fm.features = Matrix(64, 14);
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t c = 0; c < 14; ++c) fm.features(r, c) = (r % 2 == 0) ? double(c) : double(c) + 10.0;
  return fm;
}

}  // namespace

TEST_CASE("feature matrix of simple frames") {
  const auto constant = frame_feature_matrix(make_frame(0, [](int, int) { return 90; }), {});
  CHECK(constant.features.rows() == 64u);
  CHECK(constant.features.cols() == 14u);
  CHECK(distinct_rows(constant.features).size() == 1u);

  const auto split = frame_feature_matrix(
      make_frame(0, [](int r, int c) { return c < 128 ? 0 : (((r / 8 + c / 8) % 2) ? 255 : 0); }), {});
  CHECK(distinct_rows(split.features).size() == 2u);
}

TEST_CASE("affinity matrix") {
  SUBCASE("identical rows") {
    const Matrix w = affinity_matrix(Matrix(64, 14, 3.0));
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t j = 0; j < 64; ++j) REQUIRE(w(i, j) == (i == j ? 0.0 : 1.0));
  }
  SUBCASE("symmetric, bounded, zero diagonal") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix f(64, 14);
    for (auto& v : f.data()) v = g(rng);
    for (std::size_t r = 0; r < 64; ++r) f(r, 3) = 7.0;  // constant column
    const Matrix w = affinity_matrix(f);
    for (std::size_t i = 0; i < 64; ++i) {
      CHECK(w(i, i) == 0.0);
      for (std::size_t j = 0; j < 64; ++j) {
        REQUIRE(w(i, j) == w(j, i));
        REQUIRE(w(i, j) >= 0.0);
        REQUIRE(w(i, j) <= 1.0);
      }
    }
  }
  SUBCASE("scale of a column does not matter") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix f(64, 14);
    for (auto& v : f.data()) v = g(rng);
    Matrix scaled = f;
    for (std::size_t r = 0; r < 64; ++r) scaled(r, 0) *= 1000.0;
    const Matrix a = affinity_matrix(f), b = affinity_matrix(scaled);
    CHECK((a - b).frobenius_norm() <= 1e-9);
  }
}

TEST_CASE("spectral clustering recovers a block-diagonal graph") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed + 100);
    const Matrix w = block_diagonal_affinity(rng);
    const auto labels = spectral_cluster(w, 2, seed);
    REQUIRE(labels.size() == 64u);
    for (std::size_t i = 0; i < 64; ++i) CHECK((labels[i] == labels[0]) == (i < 32));
  }
  const auto one = spectral_cluster(Matrix(64, 64, 1.0), 1, 3);
  CHECK(std::all_of(one.begin(), one.end(), [](std::size_t l) { return l == 0; }));
  CHECK_THROWS_AS(spectral_cluster(Matrix(64, 64, 1.0), 65, 3), Error);
}

TEST_CASE("representative matrix") {
  SUBCASE("k = 1 gives the column mean") {
    const auto fm = two_valued_fm();
    const std::vector<std::size_t> labels(64, 0);
    const auto rm = representative_matrix(fm, labels, 1);
    REQUIRE(rm.rows.rows() == 1u);
    for (std::size_t c = 0; c < 14; ++c) CHECK(rm.rows(0, c) == double(c) + 5.0);
  }
  SUBCASE("two distinct row values are recovered, in canonical order") {
    const auto fm = two_valued_fm();
    std::vector<std::size_t> labels(64);
    for (std::size_t r = 0; r < 64; ++r) labels[r] = r % 2;
    const auto rm = representative_matrix(fm, labels, 2);
    for (std::size_t c = 0; c < 14; ++c) {
      CHECK(rm.rows(0, c) == double(c));
      CHECK(rm.rows(1, c) == double(c) + 10.0);
    }
    for (auto& l : labels) l = 1 - l;
    CHECK(representative_matrix(fm, labels, 2) == rm);
  }
  SUBCASE("larger clusters come first, empty clusters hold the global mean") {
    const auto fm = two_valued_fm();
    std::vector<std::size_t> labels(64, 2);
    labels[1] = 0;  // one odd row alone
    const auto rm = representative_matrix(fm, labels, 4);
    CHECK(rm.cluster_sizes == std::vector<std::size_t>{63, 1, 0, 0});
    for (std::size_t c = 0; c < 14; ++c) {
      CHECK(rm.rows(1, c) == double(c) + 10.0);
      CHECK(rm.rows(2, c) == double(c) + 5.0);
      CHECK(rm.rows(3, c) == double(c) + 5.0);
    }
  }
  SUBCASE("relabeling is invisible and rows stay inside the data range") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g(0.0, 1.0);
    FrameFeatureMatrix fm;
    fm.features = Matrix(64, 14);
    for (auto& v : fm.features.data()) v = g(rng);
    std::vector<std::size_t> labels(64);
    for (auto& l : labels) l = rng() % 6;
    const auto rm = representative_matrix(fm, labels, 6);
    std::vector<std::size_t> perm{3, 5, 0, 1, 4, 2};
    std::vector<std::size_t> relabeled(64);
    for (std::size_t i = 0; i < 64; ++i) relabeled[i] = perm[labels[i]];
    CHECK(representative_matrix(fm, relabeled, 6) == rm);
    for (std::size_t c = 0; c < 14; ++c) {
      double lo = fm.features(0, c), hi = lo;
      for (std::size_t r = 0; r < 64; ++r) {
        lo = std::min(lo, fm.features(r, c));
        hi = std::max(hi, fm.features(r, c));
      }
      for (std::size_t r = 0; r < rm.rows.rows(); ++r) {
        CHECK(rm.rows(r, c) >= lo);
        CHECK(rm.rows(r, c) <= hi);
      }
    }
  }
}

TEST_CASE("represent_frame") {
  const auto constant = make_frame(5, [](int, int) { return 200; });
  ReprConfig cfg;
  const auto rm = represent_frame(constant, cfg);
  CHECK(rm.frame_index == 5u);
  CHECK(rm.rows.rows() == 6u);
  CHECK(distinct_rows(rm.rows).size() == 1u);
  for (std::uint64_t seed : {1u, 99u}) {
    cfg.seed = seed;
    CHECK(represent_frame(constant, cfg).rows == rm.rows);
  }

  SUBCASE("deterministic and independent of thread count") {
    std::vector<ingest::GrayFrame> frames;
    std::mt19937_64 rng(3);
    for (std::size_t i = 0; i < 6; ++i) {
      const int salt = static_cast<int>(rng() % 200);
      frames.push_back(make_frame(i, [&](int r, int c) { return (r * 3 + c * salt + (r / 32) * 40) % 256; }));
    }
    ReprConfig base;
    const auto serial = represent_frames(frames, base, 1);
    const auto parallel = represent_frames(frames, base, 4);
    CHECK(serial == parallel);
    for (std::size_t i = 0; i < frames.size(); ++i) CHECK(serial[i] == represent_frame(frames[i], base));
  }
  SUBCASE("cluster count bounds") {
    cfg.clusters = 0;
    CHECK_THROWS_AS(represent_frame(constant, cfg), Error);
    cfg.clusters = 65;
    CHECK_THROWS_AS(represent_frame(constant, cfg), Error);
  }
}
