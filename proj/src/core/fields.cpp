// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "core/errors.hpp"

namespace chhs {

FieldVector::FieldVector(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)), coefficients_(space_ ? space_->n_dofs() : 0, 0.0) {
  if (!space_) throw ConfigError("FieldVector needs a space");
}

FieldVector::FieldVector(std::shared_ptr<const FeSpace> space, std::vector<double> coefficients)
    : space_(std::move(space)), coefficients_(std::move(coefficients)) {
  if (!space_) throw ConfigError("FieldVector needs a space");
  if (coefficients_.size() != space_->n_dofs()) {
    throw ConfigError("FieldVector length " + std::to_string(coefficients_.size()) + " does not match " +
                      std::to_string(space_->n_dofs()) + " dofs");
  }
  if (!all_finite()) throw ConfigError("FieldVector has non-finite coefficients");
}

bool FieldVector::all_finite() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(), [](double v) { return std::isfinite(v); });
}

FieldVector interpolate(const CoordinateFunction& f, std::shared_ptr<const FeSpace> space) {
  FieldVector out(space);
  const auto coords = space->dof_coords();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double v = f(coords[i].x, coords[i].y);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "interpolated function is not finite at (" << coords[i].x << ", " << coords[i].y << ")";
      throw ConfigError(os.str());
    }
    out[i] = v;
  }
  return out;
}

namespace {

void require_nested(const FeSpace& cs, const FeSpace& fs, const char* what) {
  const Mesh& cm = cs.mesh();
  const Mesh& fm = fs.mesh();
  if (cs.order() != fs.order()) throw ConfigError(std::string(what) + " needs spaces of the same order");
  if (!cm.is_uniform() || !fm.is_uniform()) throw ConfigError(std::string(what) + " needs nested uniform meshes");
  const int nc = *cm.subdivisions();
  const int nf = *fm.subdivisions();
  const auto& a = cm.domain();
  const auto& b = fm.domain();
  const bool same_domain = a.ax == b.ax && a.bx == b.bx && a.ay == b.ay && a.by == b.by;
  int ratio = nf / nc;
  const bool power_of_two = nf % nc == 0 && ratio >= 1 && (ratio & (ratio - 1)) == 0;
  if (!same_domain || !power_of_two) {
    throw ConfigError(std::string(what) + ": fine mesh (n=" + std::to_string(nf) +
                      ") is not a nested refinement of n=" + std::to_string(nc));
  }
}

}  // namespace

FieldVector transfer_to_fine(const FieldVector& coarse, std::shared_ptr<const FeSpace> fine_space) {
  const FeSpace& cs = coarse.space();
  require_nested(cs, *fine_space, "transfer_to_fine");
  FieldVector out(fine_space);
  const auto coords = fine_space->dof_coords();
  for (std::size_t i = 0; i < coords.size(); ++i) out[i] = cs.evaluate(coarse.coefficients(), coords[i]);
  return out;
}

FieldVector restrict_to_coarse(const FieldVector& fine, std::shared_ptr<const FeSpace> coarse_space) {
  const FeSpace& fs = fine.space();
  require_nested(*coarse_space, fs, "restrict_to_coarse");
  FieldVector out(coarse_space);
  const auto coords = coarse_space->dof_coords();
  for (std::size_t i = 0; i < coords.size(); ++i) out[i] = fs.evaluate(fine.coefficients(), coords[i]);
  return out;
}

double FieldNorms::h1() const { return std::sqrt(l2 * l2 + h1_semi * h1_semi); }

FieldNorms norms(std::span<const double> u, const SpaceOperators& ops) {
  return {std::sqrt(std::max(0.0, ops.mass.quadratic_form(u))),
          std::sqrt(std::max(0.0, ops.stiffness.quadratic_form(u)))};
}

FieldNorms norms(const FieldVector& u) { return norms(u.coefficients(), make_space_operators(u.space())); }

double weighted_mean(std::span<const double> u, std::span<const double> weights) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    num += weights[i] * u[i];
    den += weights[i];
  }
  return num / den;
}

void project_zero_mean(std::span<double> u, std::span<const double> weights) {
  double num = 0.0;
  double den = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    num += weights[i] * u[i];
    den += weights[i];
    scale += weights[i] * std::abs(u[i]);
  }
  const double m = num / den;
  // A mean at rounding level of the data is already zero; skipping it makes
  // the projection exactly idempotent.
  if (std::abs(m) <= 4.0 * std::numeric_limits<double>::epsilon() * (scale / den)) return;
  for (double& v : u) v -= m;
}

}  // namespace chhs
