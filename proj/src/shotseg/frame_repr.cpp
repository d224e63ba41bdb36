#include "shotseg/frame_repr.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "shotseg/error.hpp"

namespace shotseg::repr {

using linalg::Matrix;

FrameFeatureMatrix frame_feature_matrix(const ingest::GrayFrame& frame, const texture::TextureConfig& config) {
  texture::validate(config);
  FrameFeatureMatrix fm{frame.index(), Matrix(ingest::kBlockCount, texture::kFeatureCount)};
  const auto blocks = ingest::partition_blocks(frame);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto f = texture::block_texture(blocks[b], config);
    std::copy(f.begin(), f.end(), fm.features.row(b).begin());
  }
  return fm;
}

Matrix affinity_matrix(const Matrix& features) {
  const std::size_t n = features.rows(), d = features.cols();
  Matrix z(n, d);
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += features(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) var += (features(r, c) - mean) * (features(r, c) - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) continue;  // constant column stays 0
    for (std::size_t r = 0; r < n; ++r) z(r, c) = (features(r, c) - mean) / sd;
  }

  Matrix dist(n, n);
  std::vector<double> positive;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = std::sqrt(linalg::squared_distance(z.row(i), z.row(j)));
      dist(i, j) = dist(j, i) = dij;
      if (dij > 0.0) positive.push_back(dij);
    }
  }
  double sigma = 1.0;
  if (!positive.empty()) {
    std::sort(positive.begin(), positive.end());
    const std::size_t m = positive.size();
    sigma = m % 2 ? positive[m / 2] : 0.5 * (positive[m / 2 - 1] + positive[m / 2]);
  }

  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      w(i, j) = w(j, i) = std::exp(-(dist(i, j) * dist(i, j)) / (2.0 * sigma * sigma));
    }
  }
  return w;
}

std::vector<std::size_t> spectral_cluster(const Matrix& affinity, int k, std::uint64_t seed,
                                          const linalg::KMeansOptions& options) {
  const std::size_t n = affinity.rows();
  if (affinity.cols() != n) throw Error(ErrorCode::DimensionMismatch, "spectral_cluster: affinity is not square");
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::InvalidArgument, "spectral_cluster: k must lie in [1, " + std::to_string(n) + "]");
  }
  if (k == 1) return std::vector<std::size_t>(n, 0);

  std::vector<double> inv_sqrt_degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) degree += affinity(i, j);
    if (degree > 0.0) inv_sqrt_degree[i] = 1.0 / std::sqrt(degree);
  }
  Matrix normalized(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) normalized(i, j) = inv_sqrt_degree[i] * affinity(i, j) * inv_sqrt_degree[j];

  const auto eig = linalg::jacobi_eigh(normalized);
  const auto kk = static_cast<std::size_t>(k);
  Matrix embedding(n, kk);
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    for (std::size_t c = 0; c < kk; ++c) {
      embedding(i, c) = eig.vectors(i, c);
      norm += embedding(i, c) * embedding(i, c);
    }
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : embedding.row(i)) v /= norm;
  }
  return linalg::kmeans(embedding, kk, seed, options).labels;
}

RepresentativeMatrix representative_matrix(const FrameFeatureMatrix& fm, std::span<const std::size_t> labels, int k) {
  const Matrix& x = fm.features;
  if (labels.size() != x.rows()) throw Error(ErrorCode::DimensionMismatch, "representative_matrix: label count mismatch");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "representative_matrix: k must be positive");
  const auto kk = static_cast<std::size_t>(k);
  const std::size_t d = x.cols();

  Matrix sums(kk, d);
  std::vector<std::size_t> sizes(kk, 0);
  std::vector<double> global(d, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    if (labels[r] >= kk) throw Error(ErrorCode::InvalidArgument, "representative_matrix: label out of range");
    ++sizes[labels[r]];
    for (std::size_t c = 0; c < d; ++c) {
      sums(labels[r], c) += x(r, c);
      global[c] += x(r, c);
    }
  }
  Matrix means(kk, d);
  for (std::size_t c = 0; c < kk; ++c) {
    for (std::size_t j = 0; j < d; ++j) {
      means(c, j) = sizes[c] ? sums(c, j) / static_cast<double>(sizes[c]) : global[j] / static_cast<double>(x.rows());
    }
  }

  std::vector<std::size_t> order(kk);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
    const auto ra = means.row(a), rb = means.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });

  RepresentativeMatrix rm{fm.frame_index, Matrix(kk, d), std::vector<std::size_t>(kk)};
  for (std::size_t i = 0; i < kk; ++i) {
    const auto src = means.row(order[i]);
    std::copy(src.begin(), src.end(), rm.rows.row(i).begin());
    rm.cluster_sizes[i] = sizes[order[i]];
  }
  return rm;
}

RepresentativeMatrix represent_frame(const ingest::GrayFrame& frame, const ReprConfig& config) {
  if (config.clusters < kMinClusters || config.clusters > kMaxClusters) {
    throw Error(ErrorCode::InvalidArgument, "cluster count must lie in [1, 64]");
  }
  const auto fm = frame_feature_matrix(frame, config.texture);
  const auto w = affinity_matrix(fm.features);
  const auto labels = spectral_cluster(w, config.clusters, frame_seed(config.seed, frame.index()), config.kmeans);
  return representative_matrix(fm, labels, config.clusters);
}

std::vector<RepresentativeMatrix> represent_frames(std::span<const ingest::GrayFrame> frames, const ReprConfig& config,
                                                   unsigned threads) {
  std::vector<RepresentativeMatrix> out(frames.size());
  std::vector<std::exception_ptr> errors(frames.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < frames.size(); i = next++) {
      try {
        out[i] = represent_frame(frames[i], config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, frames.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace shotseg::repr
