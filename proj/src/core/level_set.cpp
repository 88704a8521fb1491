// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/level_set.hpp"

#include <cstdint>
#include <unordered_map>

namespace chhs {

std::vector<std::array<int, 3>> dof_triangles(const FeSpace& space) {
  std::vector<std::array<int, 3>> tris;
  const std::size_t ne = space.n_elements();
  tris.reserve(space.order() == 1 ? ne : 4 * ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto d = space.element_dofs(e);
    if (space.order() == 1) {
      tris.push_back({d[0], d[1], d[2]});
    } else {
      // v0 v1 v2 e01 e12 e20
      tris.push_back({d[0], d[3], d[5]});
      tris.push_back({d[3], d[1], d[4]});
      tris.push_back({d[5], d[4], d[2]});
      tris.push_back({d[3], d[4], d[5]});
    }
  }
  return tris;
}

LevelSetTopology zero_level_set_topology(const FieldVector& phi) {
  const auto tris = dof_triangles(phi.space());
  auto positive = [&](int i) { return phi[i] >= 0.0; };
  auto key = [](int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  };

  // Crossed edges become graph nodes, contour pieces inside triangles become graph edges.
  std::unordered_map<std::uint64_t, int> node_of;
  std::vector<std::array<int, 2>> links;
  auto node = [&](std::uint64_t k) {
    auto [it, inserted] = node_of.emplace(k, static_cast<int>(node_of.size()));
    return it->second;
  };
  for (const auto& t : tris) {
    int crossed[3];
    int c = 0;
    for (int j = 0; j < 3; ++j) {
      const int a = t[j];
      const int b = t[(j + 1) % 3];
      if (positive(a) != positive(b)) crossed[c++] = node(key(a, b));
    }
    if (c == 2) links.push_back({crossed[0], crossed[1]});
  }

  const int n = static_cast<int>(node_of.size());
  std::vector<int> degree(n, 0);
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& l : links) {
    ++degree[l[0]];
    ++degree[l[1]];
    parent[find(l[0])] = find(l[1]);
  }

  // A crossed edge touched by a single triangle lies on the boundary.
  std::vector<char> is_root(n, 0), has_end(n, 0);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    is_root[r] = 1;
    if (degree[i] < 2) has_end[r] = 1;
  }
  LevelSetTopology out;
  out.segments = static_cast<int>(links.size());
  for (int i = 0; i < n; ++i) {
    if (!is_root[i]) continue;
    if (has_end[i]) {
      ++out.open_curves;
    } else {
      ++out.closed_loops;
    }
  }
  return out;
}

}  // namespace chhs
