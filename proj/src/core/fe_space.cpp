// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/fe_space.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "core/errors.hpp"

namespace chhs {

namespace {
constexpr std::array<std::array<double, 2>, 3> kBaryGrad{{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};
constexpr std::array<std::array<int, 2>, 3> kEdges{{{0, 1}, {1, 2}, {2, 0}}};
}  // namespace

void ReferenceElement::values(const std::array<double, 3>& l, std::span<double> out) const {
  if (order == 1) {
    out[0] = l[0];
    out[1] = l[1];
    out[2] = l[2];
    return;
  }
  for (int i = 0; i < 3; ++i) out[i] = l[i] * (2.0 * l[i] - 1.0);
  for (int k = 0; k < 3; ++k) out[3 + k] = 4.0 * l[kEdges[k][0]] * l[kEdges[k][1]];
}

void ReferenceElement::gradients(const std::array<double, 3>& l, std::span<std::array<double, 2>> out) const {
  if (order == 1) {
    for (int i = 0; i < 3; ++i) out[i] = kBaryGrad[i];
    return;
  }
  for (int i = 0; i < 3; ++i) {
    const double s = 4.0 * l[i] - 1.0;
    out[i] = {s * kBaryGrad[i][0], s * kBaryGrad[i][1]};
  }
  for (int k = 0; k < 3; ++k) {
    const int a = kEdges[k][0];
    const int b = kEdges[k][1];
    out[3 + k] = {4.0 * (l[b] * kBaryGrad[a][0] + l[a] * kBaryGrad[b][0]),
                  4.0 * (l[b] * kBaryGrad[a][1] + l[a] * kBaryGrad[b][1])};
  }
}

Tabulation::Tabulation(const ReferenceElement& element, QuadratureRule r)
    : rule(std::move(r)), n_local(element.n_local()) {
  values.resize(rule.size() * n_local);
  gradients.resize(rule.size() * n_local);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    element.values(rule.points[q], std::span<double>(values.data() + q * n_local, n_local));
    element.gradients(rule.points[q], std::span<std::array<double, 2>>(gradients.data() + q * n_local, n_local));
  }
}

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int order) : mesh_(std::move(mesh)) {
  if (!mesh_) throw ConfigError("FeSpace needs a mesh");
  if (order != 1 && order != 2) throw ConfigError("finite element order must be 1 or 2");
  element_.order = order;
  const int nl = element_.n_local();
  const auto verts = mesh_->vertices();
  const auto tris = mesh_->triangles();
  const std::size_t ne = tris.size();

  dof_coords_.assign(verts.begin(), verts.end());
  element_dof_map_.resize(ne * nl);
  std::unordered_map<std::uint64_t, int> edge_dof;
  if (order == 2) edge_dof.reserve(ne * 2);

  for (std::size_t e = 0; e < ne; ++e) {
    const auto& t = tris[e];
    for (int i = 0; i < 3; ++i) element_dof_map_[e * nl + i] = t[i];
    if (order == 2) {
      for (int k = 0; k < 3; ++k) {
        const int a = t[kEdges[k][0]];
        const int b = t[kEdges[k][1]];
        const std::uint64_t key = (static_cast<std::uint64_t>(std::max(a, b)) << 32) |
                                  static_cast<std::uint64_t>(std::min(a, b));
        auto [it, inserted] = edge_dof.try_emplace(key, static_cast<int>(dof_coords_.size()));
        if (inserted) {
          dof_coords_.push_back({0.5 * (verts[a].x + verts[b].x), 0.5 * (verts[a].y + verts[b].y)});
        }
        element_dof_map_[e * nl + 3 + k] = it->second;
      }
    }
  }

  geometry_.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& t = tris[e];
    ElementGeometry& g = geometry_[e];
    g.origin = verts[t[0]];
    g.jac = {verts[t[1]].x - verts[t[0]].x, verts[t[2]].x - verts[t[0]].x, verts[t[1]].y - verts[t[0]].y,
             verts[t[2]].y - verts[t[0]].y};
    g.det = g.jac[0] * g.jac[3] - g.jac[1] * g.jac[2];
    if (!(g.det > 0.0)) throw ConfigError("element with nonpositive Jacobian");
    g.inv_jac_t = {g.jac[3] / g.det, -g.jac[2] / g.det, -g.jac[1] / g.det, g.jac[0] / g.det};
  }

  // Sparsity pattern: dofs sharing an element are coupled.
  const std::size_t n = dof_coords_.size();
  std::vector<std::vector<int>> cols(n);
  for (std::size_t e = 0; e < ne; ++e) {
    for (int i = 0; i < nl; ++i) {
      auto& row = cols[element_dof_map_[e * nl + i]];
      for (int j = 0; j < nl; ++j) row.push_back(element_dof_map_[e * nl + j]);
    }
  }
  std::vector<int> row_ptr{0};
  std::vector<int> col_idx;
  for (auto& row : cols) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    col_idx.insert(col_idx.end(), row.begin(), row.end());
    row_ptr.push_back(static_cast<int>(col_idx.size()));
    std::vector<int>().swap(row);
  }
  const std::size_t nnz = col_idx.size();
  pattern_ = SparseMatrix(static_cast<int>(n), static_cast<int>(n), std::move(row_ptr), std::move(col_idx),
                          std::vector<double>(nnz, 0.0));

  element_positions_.resize(ne * nl * nl);
  for (std::size_t e = 0; e < ne; ++e) {
    for (int i = 0; i < nl; ++i) {
      for (int j = 0; j < nl; ++j) {
        element_positions_[(e * nl + i) * nl + j] =
            static_cast<int>(pattern_.find(element_dof_map_[e * nl + i], element_dof_map_[e * nl + j]));
      }
    }
  }
}

double FeSpace::evaluate(std::span<const double> u, Point2 p) const {
  std::size_t tri = 0;
  std::array<double, 3> l{};
  if (mesh_->is_uniform()) {
    tri = static_cast<std::size_t>(mesh_->locate(p));
    l = mesh_->barycentric(tri, p);
  } else {
    double best = -1e300;
    for (std::size_t t = 0; t < mesh_->n_triangles(); ++t) {
      const auto b = mesh_->barycentric(t, p);
      const double m = std::min({b[0], b[1], b[2]});
      if (m > best) {
        best = m;
        tri = t;
        l = b;
      }
      if (m >= 0.0) break;
    }
  }
  std::array<double, 6> phi{};
  element_.values(l, std::span<double>(phi.data(), element_.n_local()));
  double s = 0.0;
  const auto dofs = element_dofs(tri);
  for (int i = 0; i < element_.n_local(); ++i) s += phi[i] * u[dofs[i]];
  return s;
}

}  // namespace chhs
