// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/assembly.hpp"
#include "core/diagnostics.hpp"
#include "core/errors.hpp"
#include "core/fields.hpp"
#include "core/scenarios.hpp"
#include "helpers.hpp"

using namespace chhs;
using namespace chhs::testing;
using Catch::Approx;

namespace {

ModelParams params() {
  ModelParams m;
  m.epsilon = 0.05;
  m.gamma = 0.005;
  return m;
}

// int over a triangle of (sum_i u_i l_i)^k = |T| 2/((k+1)(k+2)) h_k(u)
double power_integral(const std::array<double, 3>& u, int k, double area) {
  double h = 0.0;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; a + b <= k; ++b) h += std::pow(u[0], a) * std::pow(u[1], b) * std::pow(u[2], k - a - b);
  return area * 2.0 / ((k + 1.0) * (k + 2.0)) * h;
}

// P1 energy by hand: closed-form polynomial integrals and constant gradients.
double p1_energy_oracle(const Mesh& mesh, const std::vector<double>& phi, const ModelParams& m) {
  double bulk = 0.0;
  double grad = 0.0;
  const auto v = mesh.vertices();
  for (const auto& t : mesh.triangles()) {
    const Point2 a = v[t[0]], b = v[t[1]], c = v[t[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double area = 0.5 * std::abs(det);
    const std::array<double, 3> u{phi[t[0]], phi[t[1]], phi[t[2]]};
    bulk += 0.25 * power_integral(u, 4, area) - 0.5 * power_integral(u, 2, area) + 0.25 * area;
    const double gx = ((u[1] - u[0]) * (c.y - a.y) - (u[2] - u[0]) * (b.y - a.y)) / det;
    const double gy = ((u[2] - u[0]) * (b.x - a.x) - (u[1] - u[0]) * (c.x - a.x)) / det;
    grad += area * (gx * gx + gy * gy);
  }
  return m.gamma * (bulk / m.epsilon + 0.5 * m.epsilon * grad);
}

}  // namespace

TEST_CASE("energy of constant states") {
  auto s = unit_space(8, 2);
  const ModelParams m = params();
  CHECK(energy(interpolate([](double, double) { return 1.0; }, s), m) == Approx(0.0).margin(1e-15));
  CHECK(energy(interpolate([](double, double) { return -1.0; }, s), m) == Approx(0.0).margin(1e-15));
  CHECK(energy(interpolate([](double, double) { return 0.0; }, s), m) == Approx(m.gamma / m.epsilon * 0.25).epsilon(1e-13));
}

TEST_CASE("P1 energy matches a hand-integrated oracle") {
  auto s = unit_space(6, 1);
  const auto coords = s->dof_coords();
  const auto verts = s->mesh().vertices();
  REQUIRE(coords.size() == verts.size());
  for (std::size_t i = 0; i < coords.size(); ++i) REQUIRE((coords[i].x == verts[i].x && coords[i].y == verts[i].y));
  const auto phi = random_vector(s->n_dofs(), 31, -1.3, 1.3);
  const ModelParams m = params();
  const double oracle = p1_energy_oracle(s->mesh(), phi, m);
  CHECK(energy(FieldVector(s, phi), m) == Approx(oracle).epsilon(1e-12));
}

TEST_CASE("energy is gamma/eps times the scaled surface energy") {
  auto s = unit_space(10, 2);
  const ModelParams m = params();
  const FieldVector phi = interpolate(cosine_datum, s);
  CHECK(energy(phi, m) == Approx(m.gamma / m.epsilon * surface_energy_scaled(phi, m)).epsilon(1e-13));
}

TEST_CASE("modified energy adds the pressure term") {
  auto s = unit_space(8, 1);
  const ModelParams m = params();
  const FieldVector phi = interpolate(cosine_datum, s);
  const FieldVector zero(s);
  const double k = 0.01;
  CHECK(modified_energy(phi, zero, k, m) == Approx(energy(phi, m)).epsilon(1e-15));
  const FieldVector px = interpolate([](double x, double) { return x; }, s);
  CHECK(modified_energy(phi, px, k, m) - energy(phi, m) == Approx(k / (24.0 * m.eta1)).epsilon(1e-12));
}

TEST_CASE("mass of constant and cosine data") {
  for (int order : {1, 2}) {
    auto s = std::make_shared<const FeSpace>(
        std::make_shared<const Mesh>(generate_uniform_mesh({0.0, 2.0, -1.0, 0.5}, 7)), order);
    CHECK(mass(interpolate([](double, double) { return 0.3; }, s)) == Approx(0.3 * 3.0).epsilon(1e-13));
  }
  // the nodal interpolant of the cosine datum does not integrate to zero
  auto s = unit_space(128, 1);
  const double m = mass(interpolate(cosine_datum, s));
  CHECK(m == Approx(8.14e-6).epsilon(0.01));
  CHECK(m == Approx(1.6 / (12.0 * 128 * 128)).epsilon(1e-6));
}

TEST_CASE("Cauchy differences") {
  auto coarse = unit_space(8, 2);
  auto fine = unit_space(16, 2);
  auto quad = [](double x, double y) { return x * x - 2.0 * x * y + 0.5 * y; };
  const FieldVector uc = interpolate(quad, coarse);
  const FieldVector uf = interpolate(quad, fine);
  // quadratics are reproduced on both meshes
  for (const CauchyDifference& d : {cauchy_difference(uc, uf), cauchy_difference_on_coarse(uc, uf)}) {
    CHECK(d.l2 <= 1e-13);
    CHECK(d.h1 <= 1e-12);
  }
  // constant shift: L2 = |c| sqrt(|Omega|), no gradient
  const FieldVector shifted = interpolate([&](double x, double y) { return quad(x, y) + 0.25; }, fine);
  for (const CauchyDifference& d : {cauchy_difference(uc, shifted), cauchy_difference_on_coarse(uc, shifted)}) {
    CHECK(d.l2 == Approx(0.25).epsilon(1e-12));
    CHECK(d.h1_semi <= 1e-12);
    CHECK(d.h1 == Approx(std::hypot(d.l2, d.h1_semi)).epsilon(1e-15));
  }
  // a fine-only bump: visible on the fine mesh, absent at coarse nodes
  auto coarse1 = unit_space(4, 1);
  auto fine1 = unit_space(8, 1);
  FieldVector bump(fine1);
  const auto fc = fine1->dof_coords();
  std::size_t centre = 0;
  for (std::size_t i = 0; i < fc.size(); ++i)
    if (std::abs(fc[i].x - 0.375) < 1e-12 && std::abs(fc[i].y - 0.375) < 1e-12) centre = i;
  REQUIRE(centre != 0);
  bump[centre] = 1.0;
  const FieldVector zero(coarse1);
  CHECK(cauchy_difference_on_coarse(zero, bump).h1 == 0.0);
  CHECK(cauchy_difference(zero, bump).h1 > 1.0);
  CHECK_THROWS_AS(cauchy_difference_on_coarse(interpolate(quad, unit_space(6, 2)), uf), ConfigError);
}

TEST_CASE("convex splitting gap is nonpositive") {
  auto s = unit_space(6, 2);
  FormAssembler a(*s);
  const auto x = random_vector(s->n_dofs(), 3, -1.5, 1.5);
  const auto y = random_vector(s->n_dofs(), 4, -1.5, 1.5);
  CHECK(convex_split_violation(a, x, y) <= 1e-15);
  CHECK(convex_split_violation(a, x, x) == Approx(0.0).margin(1e-15));
}

TEST_CASE("diagnostics CSV row matches its header") {
  StepDiagnostics d;
  d.step = 3;
  d.time = 0.1;
  d.energy = 1.0 / 3.0;
  d.newton_iterations = 4;
  const std::string header = diagnostics_csv_header();
  const std::string row = diagnostics_csv_row(d);
  auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(count(header) == count(row));
  CHECK(header.rfind("step,time,energy", 0) == 0);
  std::istringstream in(row);
  std::string cell;
  std::getline(in, cell, ',');
  CHECK(cell == "3");
  std::getline(in, cell, ',');
  std::getline(in, cell, ',');
  CHECK(std::stod(cell) == 1.0 / 3.0);
}
