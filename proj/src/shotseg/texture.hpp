#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "shotseg/ingest.hpp"

namespace shotseg::texture {

inline constexpr int kFeatureCount = 14;
using TextureVector = std::array<double, kFeatureCount>;

enum class Orientation { Deg0, Deg45, Deg90, Deg135 };

struct Offset {
  int drow;
  int dcol;
};

Offset orientation_offset(Orientation o, int distance);
int orientation_degrees(Orientation o);

struct TextureConfig {
  int gray_levels = 8;
  int distance = 1;
  std::vector<Orientation> orientations{Orientation::Deg0, Orientation::Deg45, Orientation::Deg90,
                                        Orientation::Deg135};
};

// Quantized gray levels in [0, levels), row-major.
struct LevelGrid {
  int rows = 0;
  int cols = 0;
  int levels = 0;
  std::vector<int> cells;

  int at(int r, int c) const { return cells[static_cast<std::size_t>(r) * cols + c]; }
};

int quantize_value(std::uint8_t v, int levels);
LevelGrid quantize(const ingest::Block& block, int levels);
LevelGrid quantize(std::span<const std::uint8_t> pixels, int rows, int cols, int levels);

// Normalized co-occurrence matrix p(i,j) with marginals.
//   p_sum[i+j] holds p_{x+y}, p_diff[|i-j|] holds p_{x-y}.
class Glcm {
 public:
  // Normalizes a count matrix; throws if every count is zero.
  static Glcm from_counts(int levels, std::span<const std::uint64_t> counts);
  // Takes probabilities as given (they must sum to 1).
  static Glcm from_probabilities(int levels, std::span<const double> p);

  int levels() const noexcept { return levels_; }
  std::uint64_t pair_count() const noexcept { return pair_count_; }
  double operator()(int i, int j) const { return p_[static_cast<std::size_t>(i) * levels_ + j]; }
  std::span<const double> p() const noexcept { return p_; }
  std::span<const double> px() const noexcept { return px_; }
  std::span<const double> py() const noexcept { return py_; }
  std::span<const double> p_sum() const noexcept { return p_sum_; }
  std::span<const double> p_diff() const noexcept { return p_diff_; }

 private:
  explicit Glcm(int levels, std::vector<double> p, std::uint64_t pair_count);

  int levels_;
  std::uint64_t pair_count_;
  std::vector<double> p_;
  std::vector<double> px_, py_, p_sum_, p_diff_;
};

// Symmetric accumulation: each in-bounds pair (a,b) adds one to (a,b) and (b,a).
std::vector<std::uint64_t> cooccurrence_counts(const LevelGrid& grid, Offset offset);
Glcm compute_glcm(const LevelGrid& grid, Orientation orientation, int distance);

// f1..f14 of a single matrix.
TextureVector haralick_features(const Glcm& glcm);
// Per-orientation features averaged across the supplied matrices.
TextureVector haralick_features(std::span<const Glcm> per_orientation);

double maximal_correlation_coefficient(const Glcm& glcm);

TextureVector block_texture(const ingest::Block& block, const TextureConfig& config);

void validate(const TextureConfig& config);

}  // namespace shotseg::texture
