// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chhs {

/// Compressed-row sparse matrix. Column indices are sorted and unique per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
               std::vector<double> values);

  static SparseMatrix identity(int n);
  /// Same pattern as `pattern`, all values zero.
  static SparseMatrix zeros_like(const SparseMatrix& pattern);
  /// Dense row-major input; exact zeros are dropped.
  static SparseMatrix from_dense(int rows, int cols, std::span<const double> dense);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Position of (i, j) in values(), or -1 if not stored.
  std::ptrdiff_t find(int i, int j) const;
  double at(int i, int j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
  std::vector<double> row_sums() const;

  bool same_pattern(const SparseMatrix& other) const;
  /// this += alpha * other; patterns must match.
  void add_scaled(double alpha, const SparseMatrix& other);
  void scale(double alpha);

  /// Largest |A_ij - A_ji| over stored entries.
  double asymmetry() const;
  std::vector<double> to_dense() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

// Small vector helpers shared by the solvers.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace chhs
