#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shotseg/ingest.hpp"
#include "shotseg/linalg.hpp"
#include "shotseg/texture.hpp"

namespace shotseg::repr {

inline constexpr int kDefaultClusters = 6;
inline constexpr int kMinClusters = 1;
inline constexpr int kMaxClusters = ingest::kBlockCount;

struct FrameFeatureMatrix {
  std::size_t frame_index = 0;
  linalg::Matrix features;  // 64 x 14, row-major block order
};

struct RepresentativeMatrix {
  std::size_t frame_index = 0;
  linalg::Matrix rows;  // k x 14, canonical order
  std::vector<std::size_t> cluster_sizes;

  bool operator==(const RepresentativeMatrix&) const = default;
};

struct ReprConfig {
  texture::TextureConfig texture;
  int clusters = kDefaultClusters;
  std::uint64_t seed = 42;
  linalg::KMeansOptions kmeans;
};

// Seeds are split per frame as base ^ index so frames can run in any order.
inline std::uint64_t frame_seed(std::uint64_t base, std::size_t frame_index) {
  return base ^ static_cast<std::uint64_t>(frame_index);
}

FrameFeatureMatrix frame_feature_matrix(const ingest::GrayFrame& frame, const texture::TextureConfig& config);

// Gaussian affinity on column-standardized rows, sigma = median positive distance.
linalg::Matrix affinity_matrix(const linalg::Matrix& features);

// Ng-Jordan-Weiss spectral clustering of the rows behind W.
std::vector<std::size_t> spectral_cluster(const linalg::Matrix& affinity, int k, std::uint64_t seed,
                                          const linalg::KMeansOptions& options = {});

RepresentativeMatrix representative_matrix(const FrameFeatureMatrix& fm, std::span<const std::size_t> labels, int k);

RepresentativeMatrix represent_frame(const ingest::GrayFrame& frame, const ReprConfig& config);

// Parallel map over frames; output order follows the input order.
std::vector<RepresentativeMatrix> represent_frames(std::span<const ingest::GrayFrame> frames, const ReprConfig& config,
                                                   unsigned threads = 0);

}  // namespace shotseg::repr
