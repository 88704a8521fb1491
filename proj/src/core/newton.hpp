// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "core/linear_solvers.hpp"
#include "core/sparse_matrix.hpp"

namespace chhs {

using ResidualFn = std::function<void(std::span<const double> x, std::span<double> r)>;
using JacobianFn = std::function<const SparseMatrix&(std::span<const double> x)>;

struct NewtonOptions {
  /// Absolute tolerance on the Euclidean norm of the algebraic residual.
  double tol = 1e-10;
  int max_iter = 50;
  /// Halve the step while the residual norm would grow.
  bool line_search = true;
  int max_backtracks = 30;
  /// When > 0, keep the previous factorization (also across calls sharing a
  /// solver) as long as each full step cuts the residual by this factor;
  /// otherwise refresh the Jacobian.
  double reuse_contraction = 0.0;
};

struct NewtonReport {
  int iterations = 0;
  int factorizations = 0;
  double residual_norm = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
};

struct NewtonResult {
  std::vector<double> x;
  NewtonReport report;
};

/// Newton's method with a direct sparse solve per iteration. Throws
/// NewtonError (carrying the last iterate) when the residual grows for three
/// consecutive iterations or max_iter is exhausted.
NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, std::vector<double> x0,
                          const NewtonOptions& options, SparseDirectSolver* solver = nullptr);

NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, std::vector<double> x0,
                          double tol, int max_iter);

}  // namespace chhs
