// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/errors.hpp"

namespace chhs {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (rows_ < 0 || cols_ < 0) throw ConfigError("negative matrix shape");
  if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1 || row_ptr_.front() != 0 ||
      static_cast<std::size_t>(row_ptr_.back()) != col_idx_.size() || col_idx_.size() != values_.size()) {
    throw ConfigError("inconsistent CSR arrays");
  }
  for (int i = 0; i < rows_; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i]) throw ConfigError("CSR row offsets must be nondecreasing");
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_) throw ConfigError("CSR column index out of range");
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1]) {
        throw ConfigError("CSR column indices must be sorted and unique per row");
      }
      if (!std::isfinite(values_[k])) throw ConfigError("CSR value is not finite");
    }
  }
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<int> rp(n + 1);
  std::iota(rp.begin(), rp.end(), 0);
  std::vector<int> ci(n);
  std::iota(ci.begin(), ci.end(), 0);
  return SparseMatrix(n, n, std::move(rp), std::move(ci), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::zeros_like(const SparseMatrix& pattern) {
  SparseMatrix m = pattern;
  std::fill(m.values_.begin(), m.values_.end(), 0.0);
  return m;
}

SparseMatrix SparseMatrix::from_dense(int rows, int cols, std::span<const double> dense) {
  std::vector<int> rp{0};
  std::vector<int> ci;
  std::vector<double> v;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double a = dense[static_cast<std::size_t>(i) * cols + j];
      if (a != 0.0) {
        ci.push_back(j);
        v.push_back(a);
      }
    }
    rp.push_back(static_cast<int>(ci.size()));
  }
  return SparseMatrix(rows, cols, std::move(rp), std::move(ci), std::move(v));
}

std::ptrdiff_t SparseMatrix::find(int i, int j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return -1;
  return it - col_idx_.begin();
}

double SparseMatrix::at(int i, int j) const {
  const auto k = find(i, j);
  return k < 0 ? 0.0 : values_[k];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

double SparseMatrix::quadratic_form(std::span<const double> x) const {
  double s = 0.0;
  for (int i = 0; i < rows_; ++i) {
    double r = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) r += values_[k] * x[col_idx_[k]];
    s += x[i] * r;
  }
  return s;
}

std::vector<double> SparseMatrix::row_sums() const {
  std::vector<double> s(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s[i] += values_[k];
  }
  return s;
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && row_ptr_ == other.row_ptr_ &&
         col_idx_ == other.col_idx_;
}

void SparseMatrix::add_scaled(double alpha, const SparseMatrix& other) {
  if (values_.size() != other.values_.size() || rows_ != other.rows_ || cols_ != other.cols_) {
    throw ConfigError("add_scaled requires matrices with identical sparsity patterns");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += alpha * other.values_[k];
}

void SparseMatrix::scale(double alpha) {
  for (double& v : values_) v *= alpha;
}

double SparseMatrix::asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - at(col_idx_[k], i)));
    }
  }
  return worst;
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      d[static_cast<std::size_t>(i) * cols_ + col_idx_[k]] = values_[k];
    }
  }
  return d;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace chhs
