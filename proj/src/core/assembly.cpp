// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/assembly.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "core/fields.hpp"

namespace chhs {

namespace {

template <class Coef>
SparseMatrix assemble_grad_grad(const FeSpace& space, const Tabulation& tab, Coef coef) {
  SparseMatrix out = space.pattern();
  auto vals = out.values();
  const int nl = tab.n_local;
  const std::size_t nq = tab.rule.size();
  std::array<std::array<double, 2>, 6> g{};
  std::array<double, 36> local{};
  for (std::size_t e = 0; e < space.n_elements(); ++e) {
    const ElementGeometry& geo = space.geometry(e);
    local.fill(0.0);
    for (std::size_t q = 0; q < nq; ++q) {
      const double c = coef(e, q) * tab.rule.weights[q] * geo.det;
      if (c == 0.0) continue;
      for (int i = 0; i < nl; ++i) g[i] = geo.physical_gradient(tab.gradient(q, i));
      for (int i = 0; i < nl; ++i) {
        for (int j = 0; j < nl; ++j) local[i * nl + j] += c * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
      }
    }
    const auto pos = space.element_positions(e);
    for (int k = 0; k < nl * nl; ++k) vals[pos[k]] += local[k];
  }
  return out;
}

template <class Coef>
SparseMatrix assemble_value_value(const FeSpace& space, const Tabulation& tab, Coef coef) {
  SparseMatrix out = space.pattern();
  auto vals = out.values();
  const int nl = tab.n_local;
  const std::size_t nq = tab.rule.size();
  std::array<double, 36> local{};
  for (std::size_t e = 0; e < space.n_elements(); ++e) {
    const ElementGeometry& geo = space.geometry(e);
    local.fill(0.0);
    for (std::size_t q = 0; q < nq; ++q) {
      const double c = coef(e, q) * tab.rule.weights[q] * geo.det;
      if (c == 0.0) continue;
      for (int i = 0; i < nl; ++i) {
        const double vi = c * tab.value(q, i);
        for (int j = 0; j < nl; ++j) local[i * nl + j] += vi * tab.value(q, j);
      }
    }
    const auto pos = space.element_positions(e);
    for (int k = 0; k < nl * nl; ++k) vals[pos[k]] += local[k];
  }
  return out;
}

std::string describe_point(const FormAssembler& a, std::size_t e, std::size_t q) {
  const Point2 p = a.space().geometry(e).map(a.nonlinear_tabulation().rule.points[q]);
  std::ostringstream os;
  os << "element " << e << ", quadrature point " << q << " at (" << p.x << ", " << p.y << ")";
  return os.str();
}

}  // namespace

FormAssembler::FormAssembler(const FeSpace& space, int bilinear_degree, int nonlinear_degree)
    : space_(&space),
      bilinear_(space.element(), QuadratureRule::triangle(bilinear_degree)),
      nonlinear_(space.element(), QuadratureRule::triangle(nonlinear_degree)) {
  const std::size_t nq = nonlinear_.rule.size();
  measure_.resize(space.n_elements() * nq);
  for (std::size_t e = 0; e < space.n_elements(); ++e) {
    for (std::size_t q = 0; q < nq; ++q) measure_[e * nq + q] = nonlinear_.rule.weights[q] * space.geometry(e).det;
  }
}

SparseMatrix FormAssembler::mass() const {
  return assemble_value_value(*space_, bilinear_, [](std::size_t, std::size_t) { return 1.0; });
}

SparseMatrix FormAssembler::stiffness(double weight) const {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    std::ostringstream os;
    os << "stiffness weight must be positive and finite, got " << weight;
    throw AssemblyError(os.str());
  }
  return assemble_grad_grad(*space_, bilinear_, [weight](std::size_t, std::size_t) { return weight; });
}

SparseMatrix FormAssembler::weighted_stiffness(const QpField& weight) const {
  const std::size_t nq = points_per_element();
  for (std::size_t e = 0; e < space_->n_elements(); ++e) {
    for (std::size_t q = 0; q < nq; ++q) {
      const double w = weight.at(e, q);
      if (!(w > 0.0) || !std::isfinite(w)) {
        std::ostringstream os;
        os << "nonpositive stiffness weight " << w << " at " << describe_point(*this, e, q);
        throw AssemblyError(os.str());
      }
    }
  }
  return assemble_grad_grad(*space_, nonlinear_, [&](std::size_t e, std::size_t q) { return weight.at(e, q); });
}

SparseMatrix FormAssembler::gradient_coupling(const QpField& coeff) const {
  const std::size_t nq = points_per_element();
  for (std::size_t e = 0; e < space_->n_elements(); ++e) {
    for (std::size_t q = 0; q < nq; ++q) {
      if (!std::isfinite(coeff.at(e, q))) {
        throw AssemblyError("non-finite coupling coefficient at " + describe_point(*this, e, q));
      }
    }
  }
  return assemble_grad_grad(*space_, nonlinear_, [&](std::size_t e, std::size_t q) { return coeff.at(e, q); });
}

void FormAssembler::cubic_term(std::span<const double> phi, std::vector<double>& load, SparseMatrix& jacobian) const {
  const QpField v = values_at_qp(phi);
  jacobian = assemble_value_value(*space_, nonlinear_, [&](std::size_t e, std::size_t q) {
    const double p = v.at(e, q);
    return 3.0 * p * p;
  });
  QpField cube = v;
  for (double& x : cube.values) x = x * x * x;
  load = value_load(cube);
}

std::vector<double> FormAssembler::cubic_load(std::span<const double> phi) const {
  QpField cube = values_at_qp(phi);
  for (double& x : cube.values) x = x * x * x;
  return value_load(cube);
}

std::vector<double> FormAssembler::gradient_load(const QpVectorField& g) const {
  std::vector<double> b(space_->n_dofs(), 0.0);
  const int nl = nonlinear_.n_local;
  const std::size_t nq = points_per_element();
  for (std::size_t e = 0; e < space_->n_elements(); ++e) {
    const ElementGeometry& geo = space_->geometry(e);
    const auto dofs = space_->element_dofs(e);
    for (std::size_t q = 0; q < nq; ++q) {
      const auto& gq = g.at(e, q);
      const double m = measure_[e * nq + q];
      for (int i = 0; i < nl; ++i) {
        const auto grad = geo.physical_gradient(nonlinear_.gradient(q, i));
        b[dofs[i]] += m * (gq[0] * grad[0] + gq[1] * grad[1]);
      }
    }
  }
  return b;
}

std::vector<double> FormAssembler::value_load(const QpField& f) const {
  std::vector<double> b(space_->n_dofs(), 0.0);
  const int nl = nonlinear_.n_local;
  const std::size_t nq = points_per_element();
  for (std::size_t e = 0; e < space_->n_elements(); ++e) {
    const auto dofs = space_->element_dofs(e);
    for (std::size_t q = 0; q < nq; ++q) {
      const double fm = f.at(e, q) * measure_[e * nq + q];
      for (int i = 0; i < nl; ++i) b[dofs[i]] += fm * nonlinear_.value(q, i);
    }
  }
  return b;
}

QpField FormAssembler::values_at_qp(std::span<const double> u) const {
  const int nl = nonlinear_.n_local;
  const std::size_t nq = points_per_element();
  QpField out{nq, std::vector<double>(space_->n_elements() * nq, 0.0)};
  for (std::size_t e = 0; e < space_->n_elements(); ++e) {
    const auto dofs = space_->element_dofs(e);
    for (std::size_t q = 0; q < nq; ++q) {
      double s = 0.0;
      for (int i = 0; i < nl; ++i) s += nonlinear_.value(q, i) * u[dofs[i]];
      out.at(e, q) = s;
    }
  }
  return out;
}

QpVectorField FormAssembler::gradients_at_qp(std::span<const double> u) const {
  const int nl = nonlinear_.n_local;
  const std::size_t nq = points_per_element();
  QpVectorField out{nq, std::vector<std::array<double, 2>>(space_->n_elements() * nq)};
  for (std::size_t e = 0; e < space_->n_elements(); ++e) {
    const ElementGeometry& geo = space_->geometry(e);
    const auto dofs = space_->element_dofs(e);
    for (std::size_t q = 0; q < nq; ++q) {
      std::array<double, 2> r{0.0, 0.0};
      for (int i = 0; i < nl; ++i) {
        const auto& gr = nonlinear_.gradient(q, i);
        r[0] += gr[0] * u[dofs[i]];
        r[1] += gr[1] * u[dofs[i]];
      }
      out.at(e, q) = geo.physical_gradient(r);
    }
  }
  return out;
}

std::vector<Point2> FormAssembler::qp_coordinates() const {
  const std::size_t nq = points_per_element();
  std::vector<Point2> out(space_->n_elements() * nq);
  for (std::size_t e = 0; e < space_->n_elements(); ++e) {
    for (std::size_t q = 0; q < nq; ++q) out[e * nq + q] = space_->geometry(e).map(nonlinear_.rule.points[q]);
  }
  return out;
}

double FormAssembler::integrate(const QpField& f) const {
  double s = 0.0;
  for (std::size_t k = 0; k < measure_.size(); ++k) s += measure_[k] * f.values[k];
  return s;
}

SparseMatrix assemble_mass(const FeSpace& space) { return FormAssembler(space).mass(); }

SparseMatrix assemble_stiffness(const FeSpace& space, double weight) { return FormAssembler(space).stiffness(weight); }

SparseMatrix assemble_stiffness(const FeSpace& space, const FieldVector& weight) {
  FormAssembler a(space);
  return a.weighted_stiffness(a.values_at_qp(weight.coefficients()));
}

SparseMatrix assemble_weighted_gradient_coupling(const FeSpace& space, const FieldVector& coeff) {
  FormAssembler a(space);
  return a.gradient_coupling(a.values_at_qp(coeff.coefficients()));
}

CubicTerm assemble_cubic_term(const FeSpace& space, const FieldVector& phi) {
  FormAssembler a(space);
  CubicTerm out;
  a.cubic_term(phi.coefficients(), out.load, out.jacobian);
  return out;
}

SpaceOperators make_space_operators(const FeSpace& space) {
  FormAssembler a(space);
  SpaceOperators ops{a.mass(), a.stiffness(), {}};
  ops.lumped_mass = ops.mass.row_sums();
  return ops;
}

}  // namespace chhs
