// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/newton.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace chhs {

NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, std::vector<double> x0,
                          const NewtonOptions& opt, SparseDirectSolver* solver) {
  SparseDirectSolver local;
  SparseDirectSolver& lu = solver ? *solver : local;

  NewtonResult out{std::move(x0), {}};
  auto& x = out.x;
  auto& rep = out.report;
  const std::size_t n = x.size();
  std::vector<double> r(n);
  std::vector<double> trial(n);
  std::vector<double> r_trial(n);

  residual(x, r);
  double rnorm = norm2(r);
  rep.residual_history.push_back(rnorm);
  int increases = 0;

  while (true) {
    if (!std::isfinite(rnorm)) {
      throw NewtonError("Newton residual became non-finite", x, rnorm, rep.iterations);
    }
    if (rnorm <= opt.tol) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= opt.max_iter) {
      std::ostringstream os;
      os << "Newton did not converge in " << opt.max_iter << " iterations (residual " << rnorm << ")";
      throw NewtonError(os.str(), x, rnorm, rep.iterations);
    }

    if (opt.reuse_contraction > 0.0 && lu.rows() == n) {
      const std::vector<double> dx = lu.solve(r);
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - dx[i];
      residual(trial, r_trial);
      const double trial_norm = norm2(r_trial);
      if (std::isfinite(trial_norm) && trial_norm <= opt.reuse_contraction * rnorm) {
        ++rep.iterations;
        increases = 0;
        x.swap(trial);
        r.swap(r_trial);
        rnorm = trial_norm;
        rep.residual_history.push_back(rnorm);
        continue;
      }
    }

    lu.factorize(jacobian(x));
    ++rep.factorizations;
    const std::vector<double> dx = lu.solve(r);

    double step = 1.0;
    double trial_norm = 0.0;
    for (int bt = 0;; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step * dx[i];
      residual(trial, r_trial);
      trial_norm = norm2(r_trial);
      if (!opt.line_search || trial_norm < rnorm || bt >= opt.max_backtracks) break;
      step *= 0.5;
    }

    ++rep.iterations;
    increases = trial_norm >= rnorm ? increases + 1 : 0;
    x.swap(trial);
    r.swap(r_trial);
    rnorm = trial_norm;
    rep.residual_history.push_back(rnorm);
    if (increases >= 3 && rnorm > opt.tol) {
      std::ostringstream os;
      os << "Newton diverged: residual grew for 3 consecutive iterations (residual " << rnorm << ")";
      throw NewtonError(os.str(), x, rnorm, rep.iterations);
    }
  }
  rep.residual_norm = rnorm;
  return out;
}

NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, std::vector<double> x0,
                          double tol, int max_iter) {
  NewtonOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  return newton_solve(residual, jacobian, std::move(x0), opt);
}

}  // namespace chhs
