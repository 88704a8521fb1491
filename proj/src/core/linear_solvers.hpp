// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/sparse_matrix.hpp"

namespace chhs {

struct LinearSolveReport {
  int iterations = 0;
  /// Relative residual ||Ax - b|| / ||b|| (absolute when b = 0).
  double residual_norm = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
};

struct CgResult {
  std::vector<double> x;
  LinearSolveReport report;
};

struct CgOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  /// Remove the constant null space (pure-Neumann operators). The right side is
  /// projected onto the range of A and the solution to zero weighted mean.
  bool project_zero_mean = false;
  /// Weights defining the mean of the solution (lumped mass); empty = uniform.
  std::span<const double> mean_weight{};
  bool jacobi = true;
};

/// Conjugate gradients for symmetric positive (semi)definite A.
/// Non-convergence is reported, not thrown.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, const CgOptions& options);

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, double tol, int max_iter,
                  bool project_zero_mean, std::span<const double> mean_weight = {});

/// Sparse LU for the Newton subsolves. The symbolic analysis is reused while
/// the sparsity pattern stays the same.
class SparseDirectSolver {
 public:
  SparseDirectSolver();
  ~SparseDirectSolver();
  SparseDirectSolver(SparseDirectSolver&&) noexcept;
  SparseDirectSolver& operator=(SparseDirectSolver&&) noexcept;

  void factorize(const SparseMatrix& a);
  std::vector<double> solve(std::span<const double> b) const;
  /// Size of the current factorization, 0 if there is none.
  std::size_t rows() const;
  static std::string backend();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace chhs
