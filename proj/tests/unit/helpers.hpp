// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "core/fe_space.hpp"
#include "core/mesh.hpp"

namespace chhs::testing {

inline std::shared_ptr<const Mesh> unit_mesh(int n) {
  return std::make_shared<const Mesh>(generate_uniform_mesh({0.0, 1.0, 0.0, 1.0}, n));
}

inline std::shared_ptr<const FeSpace> unit_space(int n, int order) {
  return std::make_shared<const FeSpace>(unit_mesh(n), order);
}

inline std::vector<double> random_vector(std::size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace chhs::testing
