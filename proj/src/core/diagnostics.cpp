// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "core/errors.hpp"

namespace chhs {

std::string diagnostics_csv_header() {
  return "step,time,energy,modified_energy,surface_energy,mass,energy_law_residual,newton_iters,cg_iters";
}

std::string diagnostics_csv_row(const StepDiagnostics& d) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d", d.step, d.time, d.energy,
                d.modified_energy, d.surface_energy, d.mass, d.energy_law_residual, d.newton_iterations,
                d.cg_iterations);
  return buf;
}

EnergyEvaluator::EnergyEvaluator(const FormAssembler& assembler, const SpaceOperators& ops, const ModelParams& params)
    : assembler_(&assembler), ops_(&ops), params_(params) {}

double EnergyEvaluator::bulk_integral(std::span<const double> phi) const {
  QpField f = assembler_->values_at_qp(phi);
  for (double& v : f.values) v = double_well(v);
  return assembler_->integrate(f);
}

double EnergyEvaluator::energy(std::span<const double> phi) const {
  const double eps = params_.epsilon;
  return params_.gamma * (bulk_integral(phi) / eps + 0.5 * eps * ops_->stiffness.quadratic_form(phi));
}

double EnergyEvaluator::modified_energy(std::span<const double> phi, std::span<const double> p, double k) const {
  return energy(phi) + k / (24.0 * params_.eta_min()) * ops_->stiffness.quadratic_form(p);
}

double EnergyEvaluator::surface_energy_scaled(std::span<const double> phi) const {
  const double eps = params_.epsilon;
  return bulk_integral(phi) + 0.5 * eps * eps * ops_->stiffness.quadratic_form(phi);
}

double EnergyEvaluator::mass(std::span<const double> phi) const { return dot(ops_->lumped_mass, phi); }

double energy(const FieldVector& phi, const ModelParams& params) {
  FormAssembler a(phi.space());
  const SpaceOperators ops = make_space_operators(phi.space());
  return EnergyEvaluator(a, ops, params).energy(phi.coefficients());
}

double modified_energy(const FieldVector& phi, const FieldVector& p, double k, const ModelParams& params) {
  FormAssembler a(phi.space());
  const SpaceOperators ops = make_space_operators(phi.space());
  return EnergyEvaluator(a, ops, params).modified_energy(phi.coefficients(), p.coefficients(), k);
}

double surface_energy_scaled(const FieldVector& phi, const ModelParams& params) {
  FormAssembler a(phi.space());
  const SpaceOperators ops = make_space_operators(phi.space());
  return EnergyEvaluator(a, ops, params).surface_energy_scaled(phi.coefficients());
}

double mass(const FieldVector& phi) {
  const SpaceOperators ops = make_space_operators(phi.space());
  return dot(ops.lumped_mass, phi.coefficients());
}

double convex_split_violation(const FormAssembler& assembler, std::span<const double> phi_new,
                              std::span<const double> phi_old) {
  const QpField a = assembler.values_at_qp(phi_new);
  const QpField b = assembler.values_at_qp(phi_old);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const double x = a.values[k];
    const double y = b.values[k];
    const double gap = double_well(x) - double_well(y) - (x * x * x - y) * (x - y);
    worst = std::max(worst, gap);
  }
  return worst;
}

CauchyDifference cauchy_difference(const FieldVector& coarse, const FieldVector& fine, const SpaceOperators& ops) {
  const FieldVector lifted = transfer_to_fine(coarse, fine.space_ptr());
  std::vector<double> diff(fine.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = fine[i] - lifted[i];
  const FieldNorms n = norms(diff, ops);
  return {n.l2, n.h1_semi, n.h1()};
}

CauchyDifference cauchy_difference(const FieldVector& coarse, const FieldVector& fine) {
  return cauchy_difference(coarse, fine, make_space_operators(fine.space()));
}

CauchyDifference cauchy_difference_on_coarse(const FieldVector& coarse, const FieldVector& fine,
                                             const SpaceOperators& ops) {
  const FieldVector injected = restrict_to_coarse(fine, coarse.space_ptr());
  std::vector<double> diff(coarse.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = injected[i] - coarse[i];
  const FieldNorms n = norms(diff, ops);
  return {n.l2, n.h1_semi, n.h1()};
}

CauchyDifference cauchy_difference_on_coarse(const FieldVector& coarse, const FieldVector& fine) {
  return cauchy_difference_on_coarse(coarse, fine, make_space_operators(coarse.space()));
}

}  // namespace chhs
