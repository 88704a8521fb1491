// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chhs {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [ax,bx] x [ay,by].
struct Rectangle {
  double ax = 0.0;
  double bx = 1.0;
  double ay = 0.0;
  double by = 1.0;

  double width() const { return bx - ax; }
  double height() const { return by - ay; }
  double area() const { return width() * height(); }
  void validate() const;
};

using Triangle = std::array<int, 3>;
using Edge = std::array<int, 2>;

/// Conforming triangulation of a rectangle. Immutable after construction.
///
/// Meshes built by `generate_uniform_mesh` / `refine_uniform` carry structured
/// metadata (cells per side) that enables exact point location and nested
/// coarse-to-fine transfer. Every grid square is cut along the diagonal from
/// its lower-left to its upper-right corner, so level L+1 nests level L.
class Mesh {
 public:
  /// Builds a mesh from raw arrays and checks every invariant. Such a mesh is
  /// treated as unstructured.
  static Mesh from_arrays(std::vector<Point2> vertices, std::vector<Triangle> triangles);

  std::span<const Point2> vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::span<const Edge> boundary_edges() const { return boundary_edges_; }
  std::size_t n_vertices() const { return vertices_.size(); }
  std::size_t n_triangles() const { return triangles_.size(); }

  int level() const { return level_; }
  const Rectangle& domain() const { return domain_; }

  /// Cells per side for structured meshes, nullopt otherwise.
  std::optional<int> subdivisions() const { return subdivisions_; }
  bool is_uniform() const { return subdivisions_.has_value(); }

  /// Diagonal length of one grid cell (structured meshes only).
  double h() const;

  double signed_area(std::size_t tri) const;

  /// For a mesh produced by refine_uniform: children[t] lists the four fine
  /// triangles covering triangle t of the parent mesh. Empty otherwise.
  std::span<const std::array<int, 4>> parent_children() const { return parent_children_; }

  /// Index of a triangle containing p (structured meshes only). Points on
  /// shared edges resolve to either neighbour; p is clamped into the domain.
  int locate(Point2 p) const;

  /// Barycentric coordinates of p with respect to triangle `tri`.
  std::array<double, 3> barycentric(std::size_t tri, Point2 p) const;

 private:
  friend Mesh generate_uniform_mesh(const Rectangle& domain, int n);
  friend Mesh refine_uniform(const Mesh& mesh);

  Mesh() = default;
  void build_structured_connectivity();
  void compute_boundary_edges();

  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> boundary_edges_;
  std::vector<std::array<int, 4>> parent_children_;
  Rectangle domain_;
  int level_ = 0;
  std::optional<int> subdivisions_;
};

/// Uniform mesh with n cells per side: (n+1)^2 vertices, 2n^2 triangles.
Mesh generate_uniform_mesh(const Rectangle& domain, int n);

/// Splits every triangle into four through its edge midpoints.
/// Throws UnsupportedError for meshes that are not structured.
Mesh refine_uniform(const Mesh& mesh);

struct MeshCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Checks orientation, edge-manifoldness and total area.
MeshCheck check_mesh(const Mesh& mesh);

/// Legacy VTK unstructured grid (ASCII) of the bare mesh.
void write_mesh_vtk(const Mesh& mesh, const std::string& path);

}  // namespace chhs
