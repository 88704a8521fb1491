// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <string>

#include "core/assembly.hpp"
#include "core/fields.hpp"
#include "core/model.hpp"

namespace chhs {

/// Scalars recorded after every time step.
struct StepDiagnostics {
  int step = 0;
  double time = 0.0;
  double energy = 0.0;
  double modified_energy = 0.0;
  double surface_energy = 0.0;
  double mass = 0.0;
  /// (E_app^{n+1} - E_app^n) + all three dissipation terms; <= 0 up to
  /// solver tolerance when there is no body force.
  double energy_law_residual = 0.0;
  int newton_iterations = 0;
  int cg_iterations = 0;

  // Not part of the CSV stream.
  double velocity_dissipation = 0.0;
  double mobility_dissipation = 0.0;
  double gradient_jump_dissipation = 0.0;
  double convex_split_violation = 0.0;
};

/// Header of the diagnostics CSV stream.
std::string diagnostics_csv_header();
std::string diagnostics_csv_row(const StepDiagnostics& d);

/// Energy functionals evaluated with the nonlinear quadrature of `assembler`
/// and the exact weight-1 stiffness of `ops`.
class EnergyEvaluator {
 public:
  EnergyEvaluator(const FormAssembler& assembler, const SpaceOperators& ops, const ModelParams& params);

  /// gamma * [ (1/eps) int F(phi) + (eps/2) |grad phi|^2 ]
  double energy(std::span<const double> phi) const;
  /// energy + k/(24 eta1) |grad p|^2
  double modified_energy(std::span<const double> phi, std::span<const double> p, double k) const;
  /// int F(phi) + (eps^2/2) |grad phi|^2
  double surface_energy_scaled(std::span<const double> phi) const;
  double mass(std::span<const double> phi) const;
  /// int F(phi)
  double bulk_integral(std::span<const double> phi) const;

 private:
  const FormAssembler* assembler_;
  const SpaceOperators* ops_;
  ModelParams params_;
};

double energy(const FieldVector& phi, const ModelParams& params);
double modified_energy(const FieldVector& phi, const FieldVector& p, double k, const ModelParams& params);
double surface_energy_scaled(const FieldVector& phi, const ModelParams& params);
double mass(const FieldVector& phi);

/// Largest value over quadrature points of
///   F(a) - F(b) - (a^3 - b)(a - b),  a = phi_new, b = phi_old
/// which is <= 0 for exact arithmetic.
double convex_split_violation(const FormAssembler& assembler, std::span<const double> phi_new,
                              std::span<const double> phi_old);

struct CauchyDifference {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;  // full norm
};

/// Norms of fine - transfer(coarse) on the fine space.
CauchyDifference cauchy_difference(const FieldVector& coarse, const FieldVector& fine);
CauchyDifference cauchy_difference(const FieldVector& coarse, const FieldVector& fine, const SpaceOperators& fine_ops);

/// Norms of restrict(fine) - coarse on the coarse space.
CauchyDifference cauchy_difference_on_coarse(const FieldVector& coarse, const FieldVector& fine);
CauchyDifference cauchy_difference_on_coarse(const FieldVector& coarse, const FieldVector& fine,
                                             const SpaceOperators& coarse_ops);

}  // namespace chhs
