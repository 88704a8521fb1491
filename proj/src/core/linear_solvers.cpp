// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/linear_solvers.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <numeric>

#ifdef CHHS_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include "core/errors.hpp"
#include "core/fields.hpp"

namespace chhs {

namespace {

void remove_uniform_mean(std::span<double> v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= m;
}

}  // namespace

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b_in, const CgOptions& opt) {
  const std::size_t n = static_cast<std::size_t>(a.rows());
  if (a.rows() != a.cols() || b_in.size() != n) throw ConfigError("cg_solve: dimension mismatch");
  CgResult out{std::vector<double>(n, 0.0), {}};
  if (n == 0) {
    out.report.converged = true;
    return out;
  }

  std::vector<double> b(b_in.begin(), b_in.end());
  // The range of a symmetric operator with constant kernel is orthogonal to 1.
  if (opt.project_zero_mean) remove_uniform_mean(b);

  std::vector<double> inv_diag(n, 1.0);
  if (opt.jacobi) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = a.at(static_cast<int>(i), static_cast<int>(i));
      inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
    }
  }

  const double bnorm = norm2(b);
  const double scale = bnorm > 0.0 ? bnorm : 1.0;
  std::vector<double> r = b;
  std::vector<double> z(n);
  std::vector<double> p(n);
  std::vector<double> ap(n);
  auto& x = out.x;
  auto& rep = out.report;

  double rnorm = norm2(r);
  rep.residual_history.push_back(rnorm / scale);
  if (rnorm <= opt.tol * scale) {
    rep.converged = true;
    rep.residual_norm = rnorm / scale;
    return out;
  }

  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  if (opt.project_zero_mean) remove_uniform_mean(z);
  p = z;
  double rz = dot(r, z);

  for (int it = 1; it <= opt.max_iter; ++it) {
    a.multiply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;  // breakdown: search direction in the null space
    const double alpha = rz / pap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    if (opt.project_zero_mean) remove_uniform_mean(r);
    rnorm = norm2(r);
    rep.iterations = it;
    rep.residual_history.push_back(rnorm / scale);
    if (rnorm <= opt.tol * scale) break;
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    if (opt.project_zero_mean) remove_uniform_mean(z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  if (opt.project_zero_mean) {
    if (opt.mean_weight.empty()) {
      const std::vector<double> ones(n, 1.0);
      project_zero_mean(x, ones);
    } else {
      project_zero_mean(x, opt.mean_weight);
    }
  }
  // Report the true residual of the returned iterate.
  std::vector<double> res = a * std::span<const double>(x);
  for (std::size_t i = 0; i < n; ++i) res[i] -= b[i];
  rep.residual_norm = norm2(res) / scale;
  rep.converged = rep.residual_norm <= opt.tol;
  return out;
}

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, double tol, int max_iter,
                  bool project_zero_mean, std::span<const double> mean_weight) {
  CgOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  opt.project_zero_mean = project_zero_mean;
  opt.mean_weight = mean_weight;
  return cg_solve(a, b, opt);
}

struct SparseDirectSolver::Impl {
  using EigenMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
  EigenMatrix matrix;
#ifdef CHHS_HAVE_UMFPACK
  Eigen::UmfPackLU<EigenMatrix> lu;
#else
  Eigen::SparseLU<EigenMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  bool analysed = false;
  bool factorized = false;
};

SparseDirectSolver::SparseDirectSolver() : impl_(std::make_unique<Impl>()) {}
SparseDirectSolver::~SparseDirectSolver() = default;
SparseDirectSolver::SparseDirectSolver(SparseDirectSolver&&) noexcept = default;
SparseDirectSolver& SparseDirectSolver::operator=(SparseDirectSolver&&) noexcept = default;

std::string SparseDirectSolver::backend() {
#ifdef CHHS_HAVE_UMFPACK
  return "umfpack";
#else
  return "eigen-sparselu";
#endif
}

void SparseDirectSolver::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw ConfigError("direct solve needs a square matrix");
  using RowMap = Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>>;
  RowMap view(a.rows(), a.cols(), static_cast<int>(a.nnz()), a.row_ptr().data(), a.col_idx().data(),
              a.values().data());
  impl_->matrix = view;
  impl_->matrix.makeCompressed();

  const bool same = impl_->analysed && std::equal(a.row_ptr().begin(), a.row_ptr().end(), impl_->row_ptr.begin(),
                                                  impl_->row_ptr.end()) &&
                    std::equal(a.col_idx().begin(), a.col_idx().end(), impl_->col_idx.begin(), impl_->col_idx.end());
  if (!same) {
#ifdef CHHS_HAVE_UMFPACK
    // AMD fill on the coupled P2 blocks is several times worse than METIS.
    impl_->lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
#endif
    impl_->lu.analyzePattern(impl_->matrix);
    impl_->row_ptr.assign(a.row_ptr().begin(), a.row_ptr().end());
    impl_->col_idx.assign(a.col_idx().begin(), a.col_idx().end());
    impl_->analysed = true;
  }
  impl_->lu.factorize(impl_->matrix);
  impl_->factorized = impl_->lu.info() == Eigen::Success;
  if (!impl_->factorized) throw SolverError("sparse LU factorization failed (singular Jacobian?)");
}

std::size_t SparseDirectSolver::rows() const {
  return impl_->factorized ? static_cast<std::size_t>(impl_->matrix.rows()) : 0;
}

std::vector<double> SparseDirectSolver::solve(std::span<const double> b) const {
  if (!impl_->factorized) throw SolverError("direct solve before factorization");
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success) throw SolverError("sparse LU solve failed");
  return {x.data(), x.data() + x.size()};
}

}  // namespace chhs
