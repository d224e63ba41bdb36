#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace shotseg::linalg {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transposed() const;
  double trace() const;
  double frobenius_norm() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(const Matrix& a, const Matrix& b);

// Eigenvalues descending; eigenvector i is column i of `vectors`.
struct SymEigen {
  std::vector<double> values;
  Matrix vectors;
  int sweeps = 0;
};

inline constexpr int kMaxJacobiSweeps = 100;

// Cyclic Jacobi rotations on (A + A^T) / 2.
SymEigen jacobi_eigh(const Matrix& a);

// Solves A X = B for symmetric positive definite A via Cholesky.
Matrix solve_spd(const Matrix& a, const Matrix& b);

// The project PRNG: std::mt19937_64, with bit-level helpers so results do not
// depend on the standard library's distribution implementations.
using Rng = std::mt19937_64;

double uniform01(Rng& rng);
std::size_t uniform_index(Rng& rng, std::size_t n);

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
};

struct KMeansResult {
  std::vector<std::size_t> labels;
  Matrix centroids;
  double inertia = 0.0;
  // Inertia after each Lloyd update of the returned restart.
  std::vector<double> inertia_trace;
};

// k-means++ seeding and Lloyd iterations; best inertia over restarts.
KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace shotseg::linalg
