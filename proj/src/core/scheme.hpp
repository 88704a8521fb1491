// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <vector>

#include "core/assembly.hpp"
#include "core/diagnostics.hpp"
#include "core/fields.hpp"
#include "core/linear_solvers.hpp"
#include "core/model.hpp"
#include "core/newton.hpp"

namespace chhs {

/// Numerical controls of the time stepper.
struct SchemeConfig {
  double dt = 0.01;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  /// Reuse the last Jacobian factorization while a full step reduces the
  /// residual at least this much; 0 refactorizes every iteration.
  double newton_reuse = 0.3;
  double linear_tol = 1e-10;
  int linear_max_iter = 20000;
  int quad_degree_bilinear = 4;
  int quad_degree_nonlinear = 8;

  void validate() const;
};

/// Snapshot (phi^n, mu^n, p^n) at t_n. All fields share one space.
struct State {
  FieldVector phi;
  FieldVector mu;
  FieldVector p;
  int step = 0;
  double time = 0.0;
};

struct VelocityField {
  QpVectorField u;
  /// || sqrt(eta(phi^n)) u ||^2
  double eta_weighted_norm_sq = 0.0;
};

struct ChStepResult {
  FieldVector phi;
  FieldVector mu;
  NewtonReport newton;
};

struct PressureResult {
  FieldVector p;
  LinearSolveReport cg;
};

struct StepResult {
  State state;
  StepDiagnostics diagnostics;
  /// Intermediate velocity of this step (built from phi^n, p^n and mu^{n+1}).
  VelocityField velocity;
};

/// Nonlinear algebraic system for (phi^{n+1}, mu^{n+1}) given the previous
/// state, unknowns stacked as x = [phi; mu]:
///
///   R_phi = M (phi - phi^n)/k + B mu + b_n
///   R_mu  = M mu - N(phi) + M phi^n - eps^2 K phi
///
/// with B the gradient coupling of m(phi^n)/Pe + gamma (phi^n)^2 / (12 eps eta),
/// b_n the explicit pressure/buoyancy load and N(phi)_i = int phi^3 psi_i.
/// Only the (mu, phi) block of the Jacobian changes between iterations.
class CahnHilliardSystem {
 public:
  CahnHilliardSystem(const FormAssembler& assembler, const SpaceOperators& ops, const SparseMatrix& block_pattern,
                     const ModelParams& params, double phi_bar, double dt, std::span<const double> phi_n,
                     std::span<const double> p_n);

  std::size_t size() const { return 2 * n_; }
  void residual(std::span<const double> x, std::span<double> r) const;
  const SparseMatrix& jacobian(std::span<const double> x);
  const SparseMatrix& coupling() const { return coupling_; }

 private:
  const FormAssembler* assembler_;
  const SpaceOperators* ops_;
  std::size_t n_;
  double dt_;
  double eps2_;
  std::vector<double> phi_n_;
  std::vector<double> mass_phi_n_;
  std::vector<double> explicit_load_;
  SparseMatrix coupling_;
  SparseMatrix jacobian_;
  SparseMatrix cubic_jac_;
  mutable std::vector<double> work_;
};

/// Builds the 2x2 block pattern [[P, P], [P, P]] of a scalar pattern P.
SparseMatrix make_block_pattern(const SparseMatrix& pattern);
/// Copies the values of `block` (pattern P) into block (bi, bj) of `target`.
void set_block(SparseMatrix& target, int bi, int bj, const SparseMatrix& block, double scale = 1.0);

/// The decoupled, unconditionally stable stepper: a convex-splitting
/// Cahn-Hilliard solve with explicit pressure, followed by a
/// constant-coefficient pressure-increment Poisson solve.
class DecoupledScheme {
 public:
  DecoupledScheme(std::shared_ptr<const FeSpace> space, ModelParams params, SchemeConfig config);

  const FeSpace& space() const { return *space_; }
  const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
  const ModelParams& params() const { return params_; }
  const SchemeConfig& config() const { return config_; }
  const FormAssembler& assembler() const { return assembler_; }
  const SpaceOperators& operators() const { return ops_; }
  const EnergyEvaluator& energies() const { return energies_; }
  double phi_bar() const { return phi_bar_; }

  /// State at t=0: p^0 = 0 and mu^0 the L2 projection of the chemical
  /// potential of phi^0. Fixes phi_bar from phi^0 if the parameters leave it unset.
  State initial_state(const FieldVector& phi0);

  CahnHilliardSystem make_system(const State& state) const;
  ChStepResult ch_step(const State& state);
  PressureResult pressure_update(const State& state, const FieldVector& mu_next);
  VelocityField reconstruct_velocity(const State& state, const FieldVector& mu_next) const;
  StepResult advance(const State& state);

 private:
  /// grad p^n + (gamma/eps) phi^n grad mu + lambda (phi^n - phi_bar) e_y at quadrature points.
  QpVectorField velocity_bracket(const State& state, std::span<const double> mu_next) const;

  std::shared_ptr<const FeSpace> space_;
  ModelParams params_;
  SchemeConfig config_;
  FormAssembler assembler_;
  SpaceOperators ops_;
  EnergyEvaluator energies_;
  SparseMatrix block_pattern_;
  SparseDirectSolver direct_;
  double phi_bar_ = 0.0;
};

}  // namespace chhs
