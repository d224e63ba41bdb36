#include "shotseg/texture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "shotseg/error.hpp"
#include "shotseg/linalg.hpp"

namespace shotseg::texture {

namespace {

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

double entropy(std::span<const double> dist) {
  double h = 0.0;
  for (double v : dist) h -= xlogx(v);
  return h;
}

void check_levels(int levels) {
  if (levels < 2 || levels > 256) {
    throw Error(ErrorCode::InvalidArgument, "gray levels must lie in [2, 256], got " + std::to_string(levels));
  }
}

}  // namespace

Offset orientation_offset(Orientation o, int distance) {
  switch (o) {
    case Orientation::Deg0: return {0, distance};
    case Orientation::Deg45: return {-distance, distance};
    case Orientation::Deg90: return {-distance, 0};
    case Orientation::Deg135: return {-distance, -distance};
  }
  return {0, distance};
}

int orientation_degrees(Orientation o) {
  switch (o) {
    case Orientation::Deg0: return 0;
    case Orientation::Deg45: return 45;
    case Orientation::Deg90: return 90;
    case Orientation::Deg135: return 135;
  }
  return 0;
}

void validate(const TextureConfig& config) {
  check_levels(config.gray_levels);
  if (config.distance < 1) throw Error(ErrorCode::InvalidArgument, "co-occurrence distance must be at least 1");
  if (config.orientations.empty()) throw Error(ErrorCode::InvalidArgument, "orientation set is empty");
}

int quantize_value(std::uint8_t v, int levels) { return static_cast<int>(v) * levels / 256; }

LevelGrid quantize(std::span<const std::uint8_t> pixels, int rows, int cols, int levels) {
  check_levels(levels);
  if (rows < 1 || cols < 1 || pixels.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw Error(ErrorCode::InvalidArgument, "quantize: pixel count does not match grid shape");
  }
  LevelGrid grid{rows, cols, levels, std::vector<int>(pixels.size())};
  std::transform(pixels.begin(), pixels.end(), grid.cells.begin(),
                 [levels](std::uint8_t v) { return quantize_value(v, levels); });
  return grid;
}

LevelGrid quantize(const ingest::Block& block, int levels) {
  return quantize(block.pixels, ingest::kBlockSide, ingest::kBlockSide, levels);
}

Glcm::Glcm(int levels, std::vector<double> p, std::uint64_t pair_count)
    : levels_(levels), pair_count_(pair_count), p_(std::move(p)) {
  const auto n = static_cast<std::size_t>(levels);
  px_.assign(n, 0.0);
  py_.assign(n, 0.0);
  p_sum_.assign(2 * n - 1, 0.0);
  p_diff_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = p_[i * n + j];
      px_[i] += v;
      py_[j] += v;
      p_sum_[i + j] += v;
      p_diff_[i > j ? i - j : j - i] += v;
    }
  }
}

Glcm Glcm::from_counts(int levels, std::span<const std::uint64_t> counts) {
  check_levels(levels);
  if (counts.size() != static_cast<std::size_t>(levels) * static_cast<std::size_t>(levels)) {
    throw Error(ErrorCode::DimensionMismatch, "glcm: count matrix does not match level count");
  }
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw Error(ErrorCode::NoCooccurringPairs, "glcm: no co-occurring pairs");
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return Glcm(levels, std::move(p), total);
}

Glcm Glcm::from_probabilities(int levels, std::span<const double> p) {
  check_levels(levels);
  if (p.size() != static_cast<std::size_t>(levels) * static_cast<std::size_t>(levels)) {
    throw Error(ErrorCode::DimensionMismatch, "glcm: probability matrix does not match level count");
  }
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "glcm: probabilities must be finite and >= 0");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "glcm: probabilities must sum to 1");
  return Glcm(levels, std::vector<double>(p.begin(), p.end()), 0);
}

std::vector<std::uint64_t> cooccurrence_counts(const LevelGrid& grid, Offset offset) {
  const auto n = static_cast<std::size_t>(grid.levels);
  std::vector<std::uint64_t> counts(n * n, 0);
  for (int r = 0; r < grid.rows; ++r) {
    const int r2 = r + offset.drow;
    if (r2 < 0 || r2 >= grid.rows) continue;
    for (int c = 0; c < grid.cols; ++c) {
      const int c2 = c + offset.dcol;
      if (c2 < 0 || c2 >= grid.cols) continue;
      const auto a = static_cast<std::size_t>(grid.at(r, c));
      const auto b = static_cast<std::size_t>(grid.at(r2, c2));
      ++counts[a * n + b];
      ++counts[b * n + a];
    }
  }
  return counts;
}

Glcm compute_glcm(const LevelGrid& grid, Orientation orientation, int distance) {
  if (grid.cells.empty()) throw Error(ErrorCode::InvalidArgument, "glcm: empty grid");
  return Glcm::from_counts(grid.levels, cooccurrence_counts(grid, orientation_offset(orientation, distance)));
}

double maximal_correlation_coefficient(const Glcm& glcm) {
  const int n = glcm.levels();
  std::vector<int> rows, cols;
  for (int i = 0; i < n; ++i) {
    if (glcm.px()[i] > 0.0) rows.push_back(i);
    if (glcm.py()[i] > 0.0) cols.push_back(i);
  }
  if (rows.size() < 2 || cols.size() < 2) return 0.0;

  // S = Dx^{-1/2} p Dy^{-1/2}; Q is similar to S S^T, so its eigenvalues are
  // the squared singular values of S.
  linalg::Matrix s(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      s(a, b) = glcm(rows[a], cols[b]) / std::sqrt(glcm.px()[rows[a]] * glcm.py()[cols[b]]);
  const auto eig = linalg::jacobi_eigh(s * s.transposed());
  return std::sqrt(std::clamp(eig.values[1], 0.0, 1.0));
}

TextureVector haralick_features(const Glcm& g) {
  const int n = g.levels();
  const auto px = g.px(), py = g.py(), psum = g.p_sum(), pdiff = g.p_diff();

  // Gray levels are numbered 1..N_g, so sums i+j run over 2..2N_g.
  double mu_x = 0.0, mu_y = 0.0;
  for (int i = 0; i < n; ++i) {
    mu_x += (i + 1) * px[i];
    mu_y += (i + 1) * py[i];
  }
  double var_x = 0.0, var_y = 0.0;
  for (int i = 0; i < n; ++i) {
    var_x += (i + 1 - mu_x) * (i + 1 - mu_x) * px[i];
    var_y += (i + 1 - mu_y) * (i + 1 - mu_y) * py[i];
  }

  double asm_ = 0.0, ij_moment = 0.0, sum_squares = 0.0, idm = 0.0, hxy = 0.0, hxy1 = 0.0, hxy2 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double p = g(i, j);
      const double pxy = px[i] * py[j];
      asm_ += p * p;
      ij_moment += (i + 1.0) * (j + 1.0) * p;
      sum_squares += (i + 1 - mu_x) * (i + 1 - mu_x) * p;
      idm += p / (1.0 + static_cast<double>((i - j) * (i - j)));
      hxy -= xlogx(p);
      if (p > 0.0) hxy1 -= p * std::log(pxy);
      hxy2 -= xlogx(pxy);
    }
  }

  double contrast = 0.0, diff_mean = 0.0;
  for (int k = 0; k < n; ++k) {
    contrast += static_cast<double>(k) * k * pdiff[k];
    diff_mean += k * pdiff[k];
  }
  double diff_var = 0.0;
  for (int k = 0; k < n; ++k) diff_var += (k - diff_mean) * (k - diff_mean) * pdiff[k];

  double sum_avg = 0.0;
  for (std::size_t s = 0; s < psum.size(); ++s) sum_avg += (s + 2.0) * psum[s];
  double sum_var = 0.0;
  for (std::size_t s = 0; s < psum.size(); ++s) sum_var += (s + 2.0 - sum_avg) * (s + 2.0 - sum_avg) * psum[s];

  const double sd_product = std::sqrt(var_x) * std::sqrt(var_y);
  const double hx = entropy(px), hy = entropy(py);
  const double hmax = std::max(hx, hy);

  TextureVector f{};
  f[0] = asm_;
  f[1] = contrast;
  f[2] = sd_product < 1e-12 ? 0.0 : (ij_moment - mu_x * mu_y) / sd_product;
  f[3] = sum_squares;
  f[4] = idm;
  f[5] = sum_avg;
  f[6] = sum_var;
  f[7] = entropy(psum);
  f[8] = hxy;
  f[9] = diff_var;
  f[10] = entropy(pdiff);
  f[11] = hmax < 1e-12 ? 0.0 : (hxy - hxy1) / hmax;
  f[12] = std::sqrt(std::max(0.0, 1.0 - std::exp(-2.0 * (hxy2 - hxy))));
  f[13] = maximal_correlation_coefficient(g);
  return f;
}

TextureVector haralick_features(std::span<const Glcm> per_orientation) {
  if (per_orientation.empty()) throw Error(ErrorCode::InvalidArgument, "haralick_features: no orientations");
  std::vector<TextureVector> all;
  all.reserve(per_orientation.size());
  for (const Glcm& g : per_orientation) all.push_back(haralick_features(g));

  // Sum each feature in sorted order so the mean does not depend on orientation order.
  TextureVector mean{};
  std::vector<double> column(all.size());
  for (int f = 0; f < kFeatureCount; ++f) {
    for (std::size_t o = 0; o < all.size(); ++o) column[o] = all[o][f];
    std::sort(column.begin(), column.end());
    double s = 0.0;
    for (double v : column) s += v;
    mean[f] = s / static_cast<double>(all.size());
  }
  return mean;
}

TextureVector block_texture(const ingest::Block& block, const TextureConfig& config) {
  validate(config);
  const LevelGrid grid = quantize(block, config.gray_levels);
  std::vector<Glcm> matrices;
  matrices.reserve(config.orientations.size());
  for (Orientation o : config.orientations) matrices.push_back(compute_glcm(grid, o, config.distance));
  return haralick_features(matrices);
}

}  // namespace shotseg::texture
