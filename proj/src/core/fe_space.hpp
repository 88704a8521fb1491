// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "core/mesh.hpp"
#include "core/quadrature.hpp"
#include "core/sparse_matrix.hpp"

namespace chhs {

/// Lagrange shape functions of order 1 or 2 on the reference triangle.
/// Local ordering: three vertices, then edge midpoints (01, 12, 20).
struct ReferenceElement {
  int order = 1;

  int n_local() const { return order == 1 ? 3 : 6; }
  /// Values at barycentric point l (length n_local()).
  void values(const std::array<double, 3>& l, std::span<double> out) const;
  /// Reference gradients d/dxi, d/deta at barycentric point l.
  void gradients(const std::array<double, 3>& l, std::span<std::array<double, 2>> out) const;
};

/// Shape function values and reference gradients tabulated at the points of a rule.
struct Tabulation {
  QuadratureRule rule;
  int n_local = 0;
  std::vector<double> values;                    // [q * n_local + i]
  std::vector<std::array<double, 2>> gradients;  // [q * n_local + i]

  Tabulation(const ReferenceElement& element, QuadratureRule rule);
  double value(std::size_t q, int i) const { return values[q * n_local + i]; }
  const std::array<double, 2>& gradient(std::size_t q, int i) const { return gradients[q * n_local + i]; }
};

/// Affine map data for one triangle.
struct ElementGeometry {
  double det = 0.0;                    // 2 * area
  std::array<double, 4> inv_jac_t{};   // J^{-T}, row-major
  Point2 origin;
  std::array<double, 4> jac{};         // J, row-major

  std::array<double, 2> physical_gradient(const std::array<double, 2>& ref) const {
    return {inv_jac_t[0] * ref[0] + inv_jac_t[1] * ref[1], inv_jac_t[2] * ref[0] + inv_jac_t[3] * ref[1]};
  }
  Point2 map(const std::array<double, 3>& l) const {
    return {origin.x + jac[0] * l[1] + jac[1] * l[2], origin.y + jac[2] * l[1] + jac[3] * l[2]};
  }
};

/// Continuous P1/P2 space on a mesh. Holds the element-to-dof map, the
/// sparsity pattern of the scalar operators and per-element positions into it.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int order);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int order() const { return element_.order; }
  const ReferenceElement& element() const { return element_; }
  std::size_t n_dofs() const { return dof_coords_.size(); }
  std::size_t n_elements() const { return mesh_->n_triangles(); }
  int dofs_per_element() const { return element_.n_local(); }

  std::span<const Point2> dof_coords() const { return dof_coords_; }
  std::span<const int> element_dofs(std::size_t e) const {
    return {element_dof_map_.data() + e * dofs_per_element(), static_cast<std::size_t>(dofs_per_element())};
  }
  const ElementGeometry& geometry(std::size_t e) const { return geometry_[e]; }

  /// Zero matrix with the operator sparsity pattern.
  const SparseMatrix& pattern() const { return pattern_; }
  /// Positions in pattern().values() for local entry (i, j) of element e.
  std::span<const int> element_positions(std::size_t e) const {
    const std::size_t nl2 = static_cast<std::size_t>(dofs_per_element()) * dofs_per_element();
    return {element_positions_.data() + e * nl2, nl2};
  }

  /// Value of the field with coefficients `u` at a point, via point location.
  double evaluate(std::span<const double> u, Point2 p) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  ReferenceElement element_;
  std::vector<Point2> dof_coords_;
  std::vector<int> element_dof_map_;
  std::vector<ElementGeometry> geometry_;
  SparseMatrix pattern_;
  std::vector<int> element_positions_;
};

}  // namespace chhs
