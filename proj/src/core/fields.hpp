// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "core/assembly.hpp"
#include "core/fe_space.hpp"

namespace chhs {

/// Nodal coefficients of a scalar field in a FeSpace.
class FieldVector {
 public:
  explicit FieldVector(std::shared_ptr<const FeSpace> space);
  FieldVector(std::shared_ptr<const FeSpace> space, std::vector<double> coefficients);

  const FeSpace& space() const { return *space_; }
  const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
  std::size_t size() const { return coefficients_.size(); }

  std::span<const double> coefficients() const { return coefficients_; }
  std::span<double> coefficients() { return coefficients_; }
  const std::vector<double>& data() const { return coefficients_; }
  std::vector<double>& data() { return coefficients_; }

  double operator[](std::size_t i) const { return coefficients_[i]; }
  double& operator[](std::size_t i) { return coefficients_[i]; }

  bool all_finite() const;

 private:
  std::shared_ptr<const FeSpace> space_;
  std::vector<double> coefficients_;
};

using CoordinateFunction = std::function<double(double x, double y)>;

/// Nodal interpolant: coefficients = f(dof coordinates).
FieldVector interpolate(const CoordinateFunction& f, std::shared_ptr<const FeSpace> space);

/// Exact representation of a coarse field on a nested refinement of its mesh.
FieldVector transfer_to_fine(const FieldVector& coarse, std::shared_ptr<const FeSpace> fine_space);
/// Nodal interpolant of a fine-mesh field on a nested coarse space. Coarse dofs
/// are fine dofs, so this is injection.
FieldVector restrict_to_coarse(const FieldVector& fine, std::shared_ptr<const FeSpace> coarse_space);

struct FieldNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1() const;
};

FieldNorms norms(const FieldVector& u);
FieldNorms norms(std::span<const double> u, const SpaceOperators& ops);

/// Subtracts the weighted mean sum(w_i u_i)/sum(w_i) from u.
void project_zero_mean(std::span<double> u, std::span<const double> weights);
double weighted_mean(std::span<const double> u, std::span<const double> weights);

}  // namespace chhs
