// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

namespace chhs {

/// Symmetric triangle quadrature on the reference triangle (0,0),(1,0),(0,1).
/// Points are barycentric; weights are positive and sum to 1/2.
struct QuadratureRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }

  /// Smallest built-in rule exact to at least `degree` (1, 2, 4, 5, 8).
  static QuadratureRule triangle(int degree);
};

}  // namespace chhs
