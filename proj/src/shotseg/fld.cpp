#include "shotseg/fld.hpp"

#include "shotseg/error.hpp"

namespace shotseg::fld {

using linalg::Matrix;

namespace {

// x^T x (cols x cols) scaled by s, accumulated into out.
void add_gram_cols(Matrix& out, const Matrix& x, double s) {
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    for (std::size_t i = 0; i < x.cols(); ++i) {
      const double xi = s * row[i];
      if (xi == 0.0) continue;
      for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) += xi * row[j];
    }
  }
}

// x x^T (rows x rows) scaled by s, accumulated into out.
void add_gram_rows(Matrix& out, const Matrix& x, double s) {
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto ri = x.row(i);
    for (std::size_t j = 0; j < x.rows(); ++j) {
      const auto rj = x.row(j);
      double dot = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) dot += ri[c] * rj[c];
      out(i, j) += s * dot;
    }
  }
}

double trace_ratio(const Matrix& within, const Matrix& between, const FldOptions& options) {
  const std::size_t dim = within.rows();
  const double ridge = options.relative_ridge * within.trace() / static_cast<double>(dim) + options.absolute_ridge;
  Matrix regularized = within;
  for (std::size_t i = 0; i < dim; ++i) regularized(i, i) += ridge;
  return linalg::solve_spd(regularized, between).trace();
}

}  // namespace

ClassSummary::ClassSummary(std::span<const Matrix> samples) {
  for (const Matrix& s : samples) add(s);
}

void ClassSummary::add(const Matrix& sample) {
  if (count_ == 0) {
    count_ = 1;
    mean_ = sample;
    column_scatter_ = Matrix(sample.cols(), sample.cols());
    row_scatter_ = Matrix(sample.rows(), sample.rows());
    return;
  }
  if (sample.rows() != mean_.rows() || sample.cols() != mean_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "fld: samples differ in shape");
  }
  const double n = static_cast<double>(count_);
  Matrix delta = sample - mean_;
  ++count_;
  for (std::size_t i = 0; i < delta.data().size(); ++i) mean_.data()[i] += delta.data()[i] / (n + 1.0);
  add_gram_cols(column_scatter_, delta, n / (n + 1.0));
  add_gram_rows(row_scatter_, delta, n / (n + 1.0));
}

ClassSummary ClassSummary::combine(const ClassSummary& a, const ClassSummary& b) {
  if (a.count_ == 0) return b;
  if (b.count_ == 0) return a;
  if (a.mean_.rows() != b.mean_.rows() || a.mean_.cols() != b.mean_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "fld: classes differ in sample shape");
  }
  const double na = static_cast<double>(a.count_), nb = static_cast<double>(b.count_), n = na + nb;
  const Matrix delta = b.mean_ - a.mean_;
  ClassSummary out;
  out.count_ = a.count_ + b.count_;
  out.mean_ = a.mean_;
  for (std::size_t i = 0; i < delta.data().size(); ++i) out.mean_.data()[i] += delta.data()[i] * (nb / n);
  out.column_scatter_ = a.column_scatter_ + b.column_scatter_;
  out.row_scatter_ = a.row_scatter_ + b.row_scatter_;
  add_gram_cols(out.column_scatter_, delta, na * nb / n);
  add_gram_rows(out.row_scatter_, delta, na * nb / n);
  return out;
}

CriterionValue criterion_J(const ClassSummary& first, const ClassSummary& second, const FldOptions& options) {
  if (first.count() == 0 || second.count() == 0) throw Error(ErrorCode::EmptyClass, "fld: empty class");
  if (first.mean().rows() != second.mean().rows() || first.mean().cols() != second.mean().cols()) {
    throw Error(ErrorCode::DimensionMismatch, "fld: classes differ in sample shape");
  }
  const double n1 = static_cast<double>(first.count()), n2 = static_cast<double>(second.count());
  const double weight = n1 * n2 / (n1 + n2);
  const Matrix delta = first.mean() - second.mean();

  Matrix between_cols(delta.cols(), delta.cols());
  Matrix between_rows(delta.rows(), delta.rows());
  add_gram_cols(between_cols, delta, weight);
  add_gram_rows(between_rows, delta, weight);

  CriterionValue v;
  v.j_col = trace_ratio(first.column_scatter() + second.column_scatter(), between_cols, options);
  v.j_row = trace_ratio(first.row_scatter() + second.row_scatter(), between_rows, options);
  v.j = v.j_row + v.j_col;
  return v;
}

CriterionValue criterion_J(std::span<const Matrix> first, std::span<const Matrix> second, const FldOptions& options) {
  if (first.empty() || second.empty()) throw Error(ErrorCode::EmptyClass, "fld: empty class");
  return criterion_J(ClassSummary(first), ClassSummary(second), options);
}

}  // namespace shotseg::fld
