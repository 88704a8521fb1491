// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "core/errors.hpp"

namespace chhs {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

// Grid coordinate ax + w*(i/n). The quotient i/n is correctly rounded, so
// nested grids (i, n) and (2i, 2n) produce bit-identical coordinates.
double grid_coord(double a, double b, int i, int n) {
  if (i == n) return b;
  return a + (b - a) * (static_cast<double>(i) / static_cast<double>(n));
}

}  // namespace

void Rectangle::validate() const {
  if (!std::isfinite(ax) || !std::isfinite(bx) || !std::isfinite(ay) || !std::isfinite(by)) {
    throw ConfigError("domain rectangle has non-finite bounds");
  }
  if (!(bx > ax) || !(by > ay)) {
    std::ostringstream os;
    os << "degenerate domain rectangle [" << ax << "," << bx << "]x[" << ay << "," << by << "]";
    throw ConfigError(os.str());
  }
}

double Mesh::h() const {
  if (!subdivisions_) throw UnsupportedError("mesh size h is only defined for uniform meshes");
  const double dx = domain_.width() / *subdivisions_;
  const double dy = domain_.height() / *subdivisions_;
  return std::hypot(dx, dy);
}

double Mesh::signed_area(std::size_t tri) const {
  const auto& t = triangles_[tri];
  const Point2& a = vertices_[t[0]];
  const Point2& b = vertices_[t[1]];
  const Point2& c = vertices_[t[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

int Mesh::locate(Point2 p) const {
  if (!subdivisions_) throw UnsupportedError("point location requires a uniform mesh");
  const int n = *subdivisions_;
  const double sx = (p.x - domain_.ax) / domain_.width() * n;
  const double sy = (p.y - domain_.ay) / domain_.height() * n;
  const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, n - 1);
  const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, n - 1);
  const double fx = sx - i;
  const double fy = sy - j;
  const int cell = j * n + i;
  return fy <= fx ? 2 * cell : 2 * cell + 1;
}

std::array<double, 3> Mesh::barycentric(std::size_t tri, Point2 p) const {
  const auto& t = triangles_[tri];
  const Point2& a = vertices_[t[0]];
  const Point2& b = vertices_[t[1]];
  const Point2& c = vertices_[t[2]];
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
  const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
  return {1.0 - l1 - l2, l1, l2};
}

void Mesh::build_structured_connectivity() {
  const int n = *subdivisions_;
  const int stride = n + 1;
  triangles_.clear();
  triangles_.reserve(static_cast<std::size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int bl = j * stride + i;
      const int br = bl + 1;
      const int tl = bl + stride;
      const int tr = tl + 1;
      triangles_.push_back({bl, br, tr});
      triangles_.push_back({bl, tr, tl});
    }
  }
  compute_boundary_edges();
}

void Mesh::compute_boundary_edges() {
  std::unordered_map<std::uint64_t, std::pair<int, Edge>> count;
  count.reserve(triangles_.size() * 3);
  for (const auto& t : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      auto [it, inserted] = count.try_emplace(edge_key(a, b), 0, Edge{a, b});
      ++it->second.first;
    }
  }
  boundary_edges_.clear();
  for (const auto& [key, entry] : count) {
    if (entry.first == 1) boundary_edges_.push_back(entry.second);
  }
  std::sort(boundary_edges_.begin(), boundary_edges_.end());
}

Mesh Mesh::from_arrays(std::vector<Point2> vertices, std::vector<Triangle> triangles) {
  if (vertices.empty() || triangles.empty()) throw ConfigError("mesh needs vertices and triangles");
  Mesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.triangles_ = std::move(triangles);
  const int nv = static_cast<int>(mesh.vertices_.size());
  for (const auto& t : mesh.triangles_) {
    for (int v : t) {
      if (v < 0 || v >= nv) throw ConfigError("triangle references a vertex out of range");
    }
  }
  Rectangle box{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
                std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
  for (const auto& p : mesh.vertices_) {
    box.ax = std::min(box.ax, p.x);
    box.bx = std::max(box.bx, p.x);
    box.ay = std::min(box.ay, p.y);
    box.by = std::max(box.by, p.y);
  }
  box.validate();
  mesh.domain_ = box;
  mesh.compute_boundary_edges();
  const MeshCheck check = check_mesh(mesh);
  if (!check.ok) throw ConfigError("invalid mesh: " + check.problems.front());
  return mesh;
}

Mesh generate_uniform_mesh(const Rectangle& domain, int n) {
  domain.validate();
  if (n < 1) throw ConfigError("uniform mesh needs at least one subdivision per side");
  Mesh mesh;
  mesh.domain_ = domain;
  mesh.subdivisions_ = n;
  mesh.level_ = 0;
  mesh.vertices_.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    const double y = grid_coord(domain.ay, domain.by, j, n);
    for (int i = 0; i <= n; ++i) {
      mesh.vertices_.push_back({grid_coord(domain.ax, domain.bx, i, n), y});
    }
  }
  mesh.build_structured_connectivity();
  return mesh;
}

Mesh refine_uniform(const Mesh& coarse) {
  if (!coarse.is_uniform()) {
    throw UnsupportedError("refine_uniform only accepts meshes from generate_uniform_mesh/refine_uniform");
  }
  const int nc = *coarse.subdivisions_;
  const int n = 2 * nc;
  const int cstride = nc + 1;
  const int stride = n + 1;

  Mesh fine;
  fine.domain_ = coarse.domain_;
  fine.subdivisions_ = n;
  fine.level_ = coarse.level_ + 1;
  fine.vertices_.resize(static_cast<std::size_t>(stride) * stride);

  auto cv = [&](int i, int j) -> const Point2& { return coarse.vertices_[j * cstride + i]; };
  auto mid = [](const Point2& a, const Point2& b) { return Point2{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; };

  for (int J = 0; J <= n; ++J) {
    for (int I = 0; I <= n; ++I) {
      Point2& out = fine.vertices_[J * stride + I];
      const bool xe = (I % 2 == 0);
      const bool ye = (J % 2 == 0);
      if (xe && ye) {
        out = cv(I / 2, J / 2);
      } else if (!xe && ye) {
        out = mid(cv((I - 1) / 2, J / 2), cv((I + 1) / 2, J / 2));
      } else if (xe && !ye) {
        out = mid(cv(I / 2, (J - 1) / 2), cv(I / 2, (J + 1) / 2));
      } else {
        // centre of a coarse cell lies on its diagonal
        out = mid(cv((I - 1) / 2, (J - 1) / 2), cv((I + 1) / 2, (J + 1) / 2));
      }
    }
  }
  fine.build_structured_connectivity();

  auto lower = [n](int i, int j) { return 2 * (j * n + i); };
  auto upper = [n](int i, int j) { return 2 * (j * n + i) + 1; };
  fine.parent_children_.resize(coarse.triangles_.size());
  for (int j = 0; j < nc; ++j) {
    for (int i = 0; i < nc; ++i) {
      const int cell = j * nc + i;
      const int I = 2 * i;
      const int J = 2 * j;
      fine.parent_children_[2 * cell] = {lower(I, J), lower(I + 1, J), upper(I + 1, J), lower(I + 1, J + 1)};
      fine.parent_children_[2 * cell + 1] = {upper(I, J), lower(I, J + 1), upper(I, J + 1), upper(I + 1, J + 1)};
    }
  }
  return fine;
}

MeshCheck check_mesh(const Mesh& mesh) {
  MeshCheck result;
  auto fail = [&](std::string msg) {
    result.ok = false;
    result.problems.push_back(std::move(msg));
  };

  double total = 0.0;
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const double a = mesh.signed_area(t);
    if (!(a > 0.0)) fail("triangle " + std::to_string(t) + " has nonpositive signed area");
    total += a;
  }
  const double expected = mesh.domain().area();
  if (std::abs(total - expected) > 1e-12 * expected) {
    std::ostringstream os;
    os << std::setprecision(17) << "area sum " << total << " differs from domain area " << expected;
    fail(os.str());
  }

  std::unordered_map<std::uint64_t, int> count;
  for (const auto& t : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) ++count[edge_key(t[k], t[(k + 1) % 3])];
  }
  std::size_t n_boundary = 0;
  for (const auto& [key, c] : count) {
    if (c > 2) fail("edge shared by more than two triangles");
    if (c == 1) ++n_boundary;
  }
  if (n_boundary != mesh.boundary_edges().size()) fail("boundary edge list is inconsistent");
  for (const auto& e : mesh.boundary_edges()) {
    auto it = count.find(edge_key(e[0], e[1]));
    if (it == count.end() || it->second != 1) fail("tagged boundary edge is not on the boundary");
  }
  return result;
}

void write_mesh_vtk(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\nchhs mesh level " << mesh.level() << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << " 0\n";
  out << "CELLS " << mesh.n_triangles() << ' ' << 4 * mesh.n_triangles() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.n_triangles() << '\n';
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) out << "5\n";
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace chhs
