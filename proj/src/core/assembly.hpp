// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <vector>

#include "core/fe_space.hpp"
#include "core/sparse_matrix.hpp"

namespace chhs {

class FieldVector;

/// Scalar values at the quadrature points of every element, [e * n_points + q].
struct QpField {
  std::size_t points_per_element = 0;
  std::vector<double> values;

  double at(std::size_t e, std::size_t q) const { return values[e * points_per_element + q]; }
  double& at(std::size_t e, std::size_t q) { return values[e * points_per_element + q]; }
};

/// Vector values at quadrature points.
struct QpVectorField {
  std::size_t points_per_element = 0;
  std::vector<std::array<double, 2>> values;

  const std::array<double, 2>& at(std::size_t e, std::size_t q) const { return values[e * points_per_element + q]; }
  std::array<double, 2>& at(std::size_t e, std::size_t q) { return values[e * points_per_element + q]; }
};

/// Element-loop assembly engine for one space.
///
/// Constant-coefficient forms use the bilinear rule. Everything involving a
/// field-dependent coefficient (and every QpField it produces or consumes)
/// uses the nonlinear rule, so discrete identities between assembled
/// operators and pointwise diagnostics hold exactly.
class FormAssembler {
 public:
  explicit FormAssembler(const FeSpace& space, int bilinear_degree = 4, int nonlinear_degree = 8);

  const FeSpace& space() const { return *space_; }
  const Tabulation& bilinear_tabulation() const { return bilinear_; }
  const Tabulation& nonlinear_tabulation() const { return nonlinear_; }
  std::size_t points_per_element() const { return nonlinear_.rule.size(); }

  SparseMatrix mass() const;
  SparseMatrix stiffness(double weight = 1.0) const;
  /// int w grad(psi_i).grad(psi_j); throws AssemblyError if w <= 0 anywhere.
  SparseMatrix weighted_stiffness(const QpField& weight) const;
  /// int c grad(psi_i).grad(psi_j) for a sign-indefinite c; throws on non-finite c.
  SparseMatrix gradient_coupling(const QpField& coeff) const;
  /// int phi^3 psi_i and its Jacobian int 3 phi^2 psi_i psi_j.
  void cubic_term(std::span<const double> phi, std::vector<double>& load, SparseMatrix& jacobian) const;
  /// Only the load vector int phi^3 psi_i.
  std::vector<double> cubic_load(std::span<const double> phi) const;

  /// b_i = int g . grad(psi_i)
  std::vector<double> gradient_load(const QpVectorField& g) const;
  /// b_i = int f psi_i
  std::vector<double> value_load(const QpField& f) const;

  QpField values_at_qp(std::span<const double> u) const;
  QpVectorField gradients_at_qp(std::span<const double> u) const;
  std::vector<Point2> qp_coordinates() const;
  /// Quadrature weight times Jacobian determinant, [e * n_points + q].
  const std::vector<double>& qp_measure() const { return measure_; }
  double integrate(const QpField& f) const;

 private:
  const FeSpace* space_;
  Tabulation bilinear_;
  Tabulation nonlinear_;
  std::vector<double> measure_;
};

// Convenience wrappers (build a FormAssembler with default rules).
SparseMatrix assemble_mass(const FeSpace& space);
SparseMatrix assemble_stiffness(const FeSpace& space, double weight = 1.0);
/// Nodal weight field, evaluated from its FE expansion at quadrature points.
SparseMatrix assemble_stiffness(const FeSpace& space, const FieldVector& weight);
SparseMatrix assemble_weighted_gradient_coupling(const FeSpace& space, const FieldVector& coeff);

struct CubicTerm {
  std::vector<double> load;
  SparseMatrix jacobian;
};
CubicTerm assemble_cubic_term(const FeSpace& space, const FieldVector& phi);

/// Mass and weight-1 stiffness matrices plus lumped mass (row sums of M).
struct SpaceOperators {
  SparseMatrix mass;
  SparseMatrix stiffness;
  std::vector<double> lumped_mass;
};
SpaceOperators make_space_operators(const FeSpace& space);

}  // namespace chhs
