// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "core/fields.hpp"

namespace chhs {

/// Connected components of the zero level set of a discrete field.
struct LevelSetTopology {
  int open_curves = 0;   // components ending on the domain boundary
  int closed_loops = 0;  // components without endpoints
  int segments = 0;

  int components() const { return open_curves + closed_loops; }
};

/// Piecewise-linear zero contour traced on the dof triangulation (P2 elements
/// are split into four). Nodal values exactly 0 count as positive.
LevelSetTopology zero_level_set_topology(const FieldVector& phi);

/// Triangles on the dof cloud: the mesh triangles for P1, four per element for P2.
std::vector<std::array<int, 3>> dof_triangles(const FeSpace& space);

}  // namespace chhs
