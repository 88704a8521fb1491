// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/scheme.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace chhs {

void SchemeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step dt must be > 0");
  if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be > 0");
  if (!(linear_tol > 0.0)) throw ConfigError("linear_tol must be > 0");
  if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be >= 1");
  if (!(newton_reuse >= 0.0 && newton_reuse < 1.0)) throw ConfigError("newton_reuse must be in [0, 1)");
  if (linear_max_iter < 1) throw ConfigError("linear_max_iter must be >= 1");
  if (quad_degree_bilinear < 4) throw ConfigError("quad_degree_bilinear must be >= 4");
  if (quad_degree_nonlinear < 8) throw ConfigError("quad_degree_nonlinear must be >= 8");
}

SparseMatrix make_block_pattern(const SparseMatrix& p) {
  const int n = p.rows();
  const auto rp = p.row_ptr();
  const auto ci = p.col_idx();
  std::vector<int> row_ptr(2 * static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> col_idx;
  col_idx.reserve(4 * p.nnz());
  for (int half = 0; half < 2; ++half) {
    for (int r = 0; r < n; ++r) {
      for (int k = rp[r]; k < rp[r + 1]; ++k) col_idx.push_back(ci[k]);
      for (int k = rp[r]; k < rp[r + 1]; ++k) col_idx.push_back(ci[k] + n);
      row_ptr[half * n + r + 1] = static_cast<int>(col_idx.size());
    }
  }
  const std::size_t nnz = col_idx.size();
  return SparseMatrix(2 * n, 2 * n, std::move(row_ptr), std::move(col_idx), std::vector<double>(nnz, 0.0));
}

void set_block(SparseMatrix& target, int bi, int bj, const SparseMatrix& block, double scale) {
  const int n = block.rows();
  const auto rp = block.row_ptr();
  const auto src = block.values();
  auto dst = target.values();
  const std::size_t base = bi == 0 ? 0 : 2 * block.nnz();
  for (int r = 0; r < n; ++r) {
    const std::size_t offset = base + static_cast<std::size_t>(bj == 0 ? rp[r] : rp[r + 1]);
    for (int k = rp[r]; k < rp[r + 1]; ++k) dst[offset + k] = scale * src[k];
  }
}

CahnHilliardSystem::CahnHilliardSystem(const FormAssembler& assembler, const SpaceOperators& ops,
                                       const SparseMatrix& block_pattern, const ModelParams& params, double phi_bar,
                                       double dt, std::span<const double> phi_n, std::span<const double> p_n)
    : assembler_(&assembler),
      ops_(&ops),
      n_(phi_n.size()),
      dt_(dt),
      eps2_(params.epsilon * params.epsilon),
      phi_n_(phi_n.begin(), phi_n.end()),
      jacobian_(block_pattern),
      work_(phi_n.size()) {
  const QpField v = assembler.values_at_qp(phi_n);
  const QpVectorField grad_p = assembler.gradients_at_qp(p_n);

  QpField coeff = v;
  QpVectorField g{v.points_per_element, std::vector<std::array<double, 2>>(v.values.size())};
  for (std::size_t k = 0; k < v.values.size(); ++k) {
    const double phi = v.values[k];
    const double eta = eta_of_phi(phi, params);
    const double m = mobility_of_phi(phi, params);
    coeff.values[k] = m / params.peclet + params.gamma * phi * phi / (12.0 * params.epsilon * eta);
    const double c1 = phi / (12.0 * eta);
    g.values[k] = {c1 * grad_p.values[k][0], c1 * (grad_p.values[k][1] + params.lambda * (phi - phi_bar))};
  }
  coupling_ = assembler.gradient_coupling(coeff);
  explicit_load_ = assembler.gradient_load(g);
  mass_phi_n_ = ops.mass * phi_n;

  set_block(jacobian_, 0, 0, ops.mass, 1.0 / dt_);
  set_block(jacobian_, 0, 1, coupling_);
  set_block(jacobian_, 1, 1, ops.mass);
}

void CahnHilliardSystem::residual(std::span<const double> x, std::span<double> r) const {
  const auto phi = x.subspan(0, n_);
  const auto mu = x.subspan(n_, n_);
  auto r_phi = r.subspan(0, n_);
  auto r_mu = r.subspan(n_, n_);

  for (std::size_t i = 0; i < n_; ++i) work_[i] = phi[i] - phi_n_[i];
  ops_->mass.multiply(work_, r_phi);
  for (std::size_t i = 0; i < n_; ++i) r_phi[i] = r_phi[i] / dt_ + explicit_load_[i];
  coupling_.multiply(mu, work_);
  axpy(1.0, work_, r_phi);

  ops_->mass.multiply(mu, r_mu);
  const std::vector<double> cubic = assembler_->cubic_load(phi);
  ops_->stiffness.multiply(phi, work_);
  for (std::size_t i = 0; i < n_; ++i) r_mu[i] += mass_phi_n_[i] - cubic[i] - eps2_ * work_[i];
}

const SparseMatrix& CahnHilliardSystem::jacobian(std::span<const double> x) {
  std::vector<double> unused;
  assembler_->cubic_term(x.subspan(0, n_), unused, cubic_jac_);
  cubic_jac_.add_scaled(eps2_, ops_->stiffness);
  set_block(jacobian_, 1, 0, cubic_jac_, -1.0);
  return jacobian_;
}

DecoupledScheme::DecoupledScheme(std::shared_ptr<const FeSpace> space, ModelParams params, SchemeConfig config)
    : space_(std::move(space)),
      params_(std::move(params)),
      config_(config),
      assembler_(*space_, config.quad_degree_bilinear, config.quad_degree_nonlinear),
      ops_{assembler_.mass(), assembler_.stiffness(), {}},
      energies_(assembler_, ops_, params_),
      block_pattern_(make_block_pattern(space_->pattern())),
      phi_bar_(params_.phi_bar.value_or(0.0)) {
  params_.validate();
  config_.validate();
  ops_.lumped_mass = ops_.mass.row_sums();
}

State DecoupledScheme::initial_state(const FieldVector& phi0) {
  if (phi0.space_ptr() != space_) throw ConfigError("initial datum lives on a different space");
  if (!params_.phi_bar) phi_bar_ = energies_.mass(phi0.coefficients()) / space_->mesh().domain().area();

  // mu^0 = L2 projection of phi^3 - phi - eps^2 Laplace(phi).
  std::vector<double> rhs = assembler_.cubic_load(phi0.coefficients());
  const std::vector<double> m_phi = ops_.mass * phi0.coefficients();
  const std::vector<double> k_phi = ops_.stiffness * phi0.coefficients();
  const double eps2 = params_.epsilon * params_.epsilon;
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += eps2 * k_phi[i] - m_phi[i];
  CgOptions opt;
  opt.tol = config_.linear_tol;
  opt.max_iter = config_.linear_max_iter;
  CgResult mu0 = cg_solve(ops_.mass, rhs, opt);
  if (!mu0.report.converged) throw SolverError("mass-matrix solve for the initial chemical potential did not converge");

  return State{phi0, FieldVector(space_, std::move(mu0.x)), FieldVector(space_), 0, 0.0};
}

CahnHilliardSystem DecoupledScheme::make_system(const State& s) const {
  return CahnHilliardSystem(assembler_, ops_, block_pattern_, params_, phi_bar_, config_.dt, s.phi.coefficients(),
                            s.p.coefficients());
}

ChStepResult DecoupledScheme::ch_step(const State& s) {
  CahnHilliardSystem system = make_system(s);
  const std::size_t n = space_->n_dofs();
  std::vector<double> x0(2 * n);
  std::copy(s.phi.data().begin(), s.phi.data().end(), x0.begin());
  std::copy(s.mu.data().begin(), s.mu.data().end(), x0.begin() + n);

  NewtonOptions opt;
  opt.tol = config_.newton_tol;
  opt.max_iter = config_.newton_max_iter;
  opt.reuse_contraction = config_.newton_reuse;
  NewtonResult res;
  try {
    res = newton_solve([&](std::span<const double> x, std::span<double> r) { system.residual(x, r); },
                       [&](std::span<const double> x) -> const SparseMatrix& { return system.jacobian(x); },
                       std::move(x0), opt, &direct_);
  } catch (const NewtonError& e) {
    std::ostringstream os;
    os << "step " << s.step + 1 << ": Cahn-Hilliard solve failed: " << e.what();
    throw StepError(s.step + 1, e.residual_norm(), os.str());
  }
  std::vector<double> phi(res.x.begin(), res.x.begin() + n);
  std::vector<double> mu(res.x.begin() + n, res.x.end());
  return {FieldVector(space_, std::move(phi)), FieldVector(space_, std::move(mu)), std::move(res.report)};
}

QpVectorField DecoupledScheme::velocity_bracket(const State& s, std::span<const double> mu_next) const {
  const QpField v = assembler_.values_at_qp(s.phi.coefficients());
  const QpVectorField gp = assembler_.gradients_at_qp(s.p.coefficients());
  QpVectorField out = assembler_.gradients_at_qp(mu_next);
  const double ratio = params_.gamma / params_.epsilon;
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    const double phi = v.values[k];
    auto& b = out.values[k];
    b[0] = gp.values[k][0] + ratio * phi * b[0];
    b[1] = gp.values[k][1] + ratio * phi * b[1] + params_.lambda * (phi - phi_bar_);
  }
  return out;
}

PressureResult DecoupledScheme::pressure_update(const State& s, const FieldVector& mu_next) {
  QpVectorField g = velocity_bracket(s, mu_next.coefficients());
  const QpField v = assembler_.values_at_qp(s.phi.coefficients());
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const double c = -params_.eta_min() / eta_of_phi(v.values[k], params_);
    g.values[k][0] *= c;
    g.values[k][1] *= c;
  }
  const std::vector<double> rhs = assembler_.gradient_load(g);

  CgOptions opt;
  opt.tol = config_.linear_tol;
  opt.max_iter = config_.linear_max_iter;
  opt.project_zero_mean = true;
  opt.mean_weight = ops_.lumped_mass;
  CgResult inc = cg_solve(ops_.stiffness, rhs, opt);
  if (!inc.report.converged) {
    std::ostringstream os;
    os << "step " << s.step + 1 << ": pressure CG did not converge (relative residual " << inc.report.residual_norm
       << " after " << inc.report.iterations << " iterations)";
    throw StepError(s.step + 1, inc.report.residual_norm, os.str());
  }
  std::vector<double> p = s.p.data();
  axpy(1.0, inc.x, p);
  project_zero_mean(p, ops_.lumped_mass);
  return {FieldVector(space_, std::move(p)), std::move(inc.report)};
}

VelocityField DecoupledScheme::reconstruct_velocity(const State& s, const FieldVector& mu_next) const {
  VelocityField out{velocity_bracket(s, mu_next.coefficients()), 0.0};
  const QpField v = assembler_.values_at_qp(s.phi.coefficients());
  const auto& measure = assembler_.qp_measure();
  for (std::size_t k = 0; k < out.u.values.size(); ++k) {
    const double eta = eta_of_phi(v.values[k], params_);
    auto& u = out.u.values[k];
    u[0] = -u[0] / (12.0 * eta);
    u[1] = -u[1] / (12.0 * eta);
    out.eta_weighted_norm_sq += measure[k] * eta * (u[0] * u[0] + u[1] * u[1]);
  }
  return out;
}

StepResult DecoupledScheme::advance(const State& s) {
  ChStepResult ch = ch_step(s);
  PressureResult pr = pressure_update(s, ch.mu);
  VelocityField vel = reconstruct_velocity(s, ch.mu);

  const double k = config_.dt;
  StepResult out{State{std::move(ch.phi), std::move(ch.mu), std::move(pr.p), s.step + 1, (s.step + 1) * k}, {}, {}};
  const State& next = out.state;
  StepDiagnostics& d = out.diagnostics;
  d.step = next.step;
  d.time = next.time;
  d.energy = energies_.energy(next.phi.coefficients());
  d.modified_energy = d.energy + k / (24.0 * params_.eta_min()) * ops_.stiffness.quadratic_form(next.p.coefficients());
  d.surface_energy = energies_.surface_energy_scaled(next.phi.coefficients());
  d.mass = energies_.mass(next.phi.coefficients());
  d.newton_iterations = ch.newton.iterations;
  d.cg_iterations = pr.cg.iterations;

  // Dissipation terms of the modified energy law.
  const QpField v = assembler_.values_at_qp(s.phi.coefficients());
  const QpVectorField gmu = assembler_.gradients_at_qp(next.mu.coefficients());
  const auto& measure = assembler_.qp_measure();
  double mobility_norm = 0.0;
  for (std::size_t q = 0; q < v.values.size(); ++q) {
    const auto& g = gmu.values[q];
    mobility_norm += measure[q] * mobility_of_phi(v.values[q], params_) * (g[0] * g[0] + g[1] * g[1]);
  }
  std::vector<double> jump = next.phi.data();
  axpy(-1.0, s.phi.data(), jump);

  const double gamma = params_.gamma;
  const double eps = params_.epsilon;
  d.velocity_dissipation = 6.0 * k * vel.eta_weighted_norm_sq;
  d.mobility_dissipation = k * gamma / (eps * params_.peclet) * mobility_norm;
  d.gradient_jump_dissipation = 0.5 * gamma * eps * ops_.stiffness.quadratic_form(jump);
  const double previous = energies_.modified_energy(s.phi.coefficients(), s.p.coefficients(), k);
  d.energy_law_residual = (d.modified_energy - previous) + d.velocity_dissipation + d.mobility_dissipation +
                          d.gradient_jump_dissipation;
  d.convex_split_violation = convex_split_violation(assembler_, next.phi.coefficients(), s.phi.coefficients());
  out.velocity = std::move(vel);
  return out;
}

}  // namespace chhs
