#pragma once

#include <span>

#include "shotseg/linalg.hpp"

namespace shotseg::fld {

// Running mean and mean-centered scatter of a class of equally-shaped matrices,
// in both the column (d x d) and row (k x k) directions.
class ClassSummary {
 public:
  ClassSummary() = default;
  explicit ClassSummary(std::span<const linalg::Matrix> samples);

  void add(const linalg::Matrix& sample);
  static ClassSummary combine(const ClassSummary& a, const ClassSummary& b);

  std::size_t count() const noexcept { return count_; }
  const linalg::Matrix& mean() const noexcept { return mean_; }
  const linalg::Matrix& column_scatter() const noexcept { return column_scatter_; }
  const linalg::Matrix& row_scatter() const noexcept { return row_scatter_; }

 private:
  std::size_t count_ = 0;
  linalg::Matrix mean_;
  linalg::Matrix column_scatter_;
  linalg::Matrix row_scatter_;
};

struct CriterionValue {
  double j = 0.0;
  double j_row = 0.0;
  double j_col = 0.0;
};

// Ridge added to the within-class scatter: relative * trace(S_w) / dim + absolute.
struct FldOptions {
  double relative_ridge = 1e-6;
  double absolute_ridge = 1e-12;
};

CriterionValue criterion_J(const ClassSummary& first, const ClassSummary& second, const FldOptions& options = {});
CriterionValue criterion_J(std::span<const linalg::Matrix> first, std::span<const linalg::Matrix> second,
                           const FldOptions& options = {});

}  // namespace shotseg::fld
