// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/scenarios.hpp"
#include "core/scheme.hpp"
#include "helpers.hpp"

using namespace chhs;
using namespace chhs::testing;
using Catch::Approx;
using std::numbers::pi;

namespace {

ModelParams convergence_params() {
  ModelParams p;
  p.epsilon = 0.05;
  p.peclet = 20.0;
  p.gamma = 0.005;
  p.eta_model = ViscosityModel::LinearTruncated;
  p.eta1 = 0.0042;
  p.eta2 = 0.083;
  p.mobility_model = MobilityModel::RegularizedDegenerate;
  return p;
}

SchemeConfig config_with_dt(double dt) {
  SchemeConfig c;
  c.dt = dt;
  return c;
}

FieldVector constant(const std::shared_ptr<const FeSpace>& s, double c) {
  return FieldVector(s, std::vector<double>(s->n_dofs(), c));
}

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& a, double scale = 1.0, int row0 = 0, int col0 = 0,
                                     std::vector<Eigen::Triplet<double>>* out = nullptr) {
  std::vector<Eigen::Triplet<double>> local;
  auto& t = out ? *out : local;
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (int r = 0; r < a.rows(); ++r)
    for (int k = rp[r]; k < rp[r + 1]; ++k) t.emplace_back(row0 + r, col0 + ci[k], scale * v[k]);
  Eigen::SparseMatrix<double> m(a.rows(), a.cols());
  if (!out) m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

TEST_CASE("viscosity closure") {
  ModelParams p = convergence_params();
  CHECK(eta_of_phi(0.0, p) == Approx(0.0436).epsilon(1e-14));
  CHECK(eta_of_phi(2.0, p) == p.eta1);
  CHECK(eta_of_phi(-1.0, p) == p.eta2);
  CHECK(eta_of_phi(-3.0, p) == p.eta2);
  for (double phi = -2.0; phi <= 2.0; phi += 0.125) {
    CHECK(eta_of_phi(phi, p) >= p.eta1);
    CHECK(eta_of_phi(phi, p) <= p.eta2);
  }
  p.eta_model = ViscosityModel::Constant;
  CHECK(eta_of_phi(0.3, p) == p.eta1);
}

TEST_CASE("mobility closure") {
  ModelParams p = convergence_params();
  CHECK(mobility_of_phi(1.0, p) == Approx(0.05).epsilon(1e-15));
  CHECK(mobility_of_phi(-1.0, p) == Approx(0.05).epsilon(1e-15));
  CHECK(mobility_of_phi(0.0, p) == Approx(std::sqrt(1.0 + 0.0025)).epsilon(1e-15));
  for (double phi = -3.0; phi <= 3.0; phi += 0.1) CHECK(mobility_of_phi(phi, p) >= p.epsilon);
}

TEST_CASE("model parameter validation") {
  ModelParams p = convergence_params();
  CHECK_NOTHROW(p.validate());
  p.epsilon = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = convergence_params();
  p.eta2 = 0.001;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = convergence_params();
  p.gamma = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK_THROWS_AS(config_with_dt(0.0).validate(), ConfigError);
  CHECK_THROWS_AS(viscosity_model_from_string("cubic"), ConfigError);
}

TEST_CASE("constant states are fixed points") {
  for (int order : {1, 2}) {
    auto s = unit_space(6, order);
    DecoupledScheme scheme(s, convergence_params(), config_with_dt(0.1));
    const double c = 0.3;
    const State s0 = scheme.initial_state(constant(s, c));
    for (double v : s0.mu.data()) CHECK(v == Approx(c * c * c - c).margin(1e-12));

    const ChStepResult ch = scheme.ch_step(s0);
    for (double v : ch.phi.data()) CHECK(v == Approx(c).margin(1e-13));
    for (double v : ch.mu.data()) CHECK(v == Approx(c * c * c - c).margin(1e-12));

    const StepResult r = scheme.advance(s0);
    for (double v : r.state.phi.data()) CHECK(v == Approx(c).margin(1e-13));
    for (double v : r.state.p.data()) CHECK(std::abs(v) <= 1e-12);
    CHECK(r.state.step == 1);
    CHECK(r.state.time == 0.1);
    for (const auto& u : r.velocity.u.values) {
      CHECK(std::abs(u[0]) <= 1e-12);
      CHECK(std::abs(u[1]) <= 1e-12);
    }
  }
}

TEST_CASE("one Cahn-Hilliard step agrees with a Picard iteration") {
  // level 5: n = 32, k = (0.2/sqrt 2) h = 0.2/32
  auto s = unit_space(32, 1);
  const ModelParams params = convergence_params();
  const double k = 0.2 / 32.0;
  DecoupledScheme scheme(s, params, config_with_dt(k));
  const State s0 = scheme.initial_state(interpolate(cosine_datum, s));
  const ChStepResult newton = scheme.ch_step(s0);
  CHECK(newton.newton.converged);

  FormAssembler a(*s);
  const SparseMatrix m = a.mass();
  const SparseMatrix kk = a.stiffness();
  const QpField v = a.values_at_qp(s0.phi.coefficients());
  QpField c = v;
  for (std::size_t q = 0; q < v.values.size(); ++q) {
    const double phi = v.values[q];
    const double eta = eta_of_phi(phi, params);
    c.values[q] = mobility_of_phi(phi, params) / params.peclet + params.gamma * phi * phi / (12 * params.epsilon * eta);
  }
  const SparseMatrix b = a.gradient_coupling(c);
  const int n = static_cast<int>(s->n_dofs());
  const double eps2 = params.epsilon * params.epsilon;

  Eigen::VectorXd phin = Eigen::Map<const Eigen::VectorXd>(s0.phi.data().data(), n);
  Eigen::VectorXd rhs(2 * n);
  const Eigen::SparseMatrix<double> me = to_eigen(m);
  rhs.head(n) = me * phin / k;
  rhs.tail(n) = -(me * phin);

  Eigen::VectorXd phi = phin;
  Eigen::VectorXd x;
  int it = 0;
  double change = 0.0;
  for (; it < 200; ++it) {
    std::vector<double> load;
    SparseMatrix jac;
    a.cubic_term(std::span<const double>(phi.data(), n), load, jac);
    std::vector<Eigen::Triplet<double>> t;
    to_eigen(m, 1.0 / k, 0, 0, &t);
    to_eigen(b, 1.0, 0, n, &t);
    to_eigen(jac, -1.0 / 3.0, n, 0, &t);  // -(phi^k)^2 mass
    to_eigen(kk, -eps2, n, 0, &t);
    to_eigen(m, 1.0, n, n, &t);
    Eigen::SparseMatrix<double> big(2 * n, 2 * n);
    big.setFromTriplets(t.begin(), t.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(big);
    REQUIRE(lu.info() == Eigen::Success);
    x = lu.solve(rhs);
    change = (x.head(n) - phi).lpNorm<Eigen::Infinity>();
    phi = x.head(n);
    if (change < 1e-13) break;
  }
  INFO("Picard iterations " << it << ", last change " << change);
  REQUIRE(it < 200);

  std::vector<double> diff(n);
  for (int i = 0; i < n; ++i) diff[i] = newton.phi[i] - phi[i];
  CHECK(std::sqrt(m.quadratic_form(diff)) <= 1e-8);
  for (int i = 0; i < n; ++i) diff[i] = newton.mu[i] - x[n + i];
  CHECK(std::sqrt(m.quadratic_form(diff)) <= 1e-8);
}

TEST_CASE("system Jacobian matches finite differences and keeps its mu blocks") {
  auto s = unit_space(4, 2);
  ModelParams params = convergence_params();
  params.lambda = 1.5;
  DecoupledScheme scheme(s, params, config_with_dt(0.05));
  State s0 = scheme.initial_state(FieldVector(s, random_vector(s->n_dofs(), 3, -0.9, 0.9)));
  s0.p = FieldVector(s, random_vector(s->n_dofs(), 4, -0.1, 0.1));
  CahnHilliardSystem sys = scheme.make_system(s0);
  const std::size_t n = s->n_dofs();

  const auto x = random_vector(2 * n, 5);
  const SparseMatrix j1 = sys.jacobian(x);
  const double h = 1e-6;
  double worst = 0.0;
  std::vector<double> rp(2 * n), rm(2 * n);
  for (std::size_t col = 0; col < 2 * n; col += 5) {
    std::vector<double> xp = x, xm = x;
    xp[col] += h;
    xm[col] -= h;
    sys.residual(xp, rp);
    sys.residual(xm, rm);
    for (std::size_t row = 0; row < 2 * n; ++row) {
      const double fd = (rp[row] - rm[row]) / (2 * h);
      const double ex = j1.at(static_cast<int>(row), static_cast<int>(col));
      worst = std::max(worst, std::abs(fd - ex) / (1.0 + std::abs(ex)));
    }
  }
  CHECK(worst <= 1e-5);

  const auto y = random_vector(2 * n, 6);
  const SparseMatrix j2 = sys.jacobian(y);
  bool mu_blocks_equal = true;
  for (int r = 0; r < static_cast<int>(2 * n); ++r) {
    for (int c = static_cast<int>(n); c < static_cast<int>(2 * n); ++c) {
      if (j1.at(r, c) != j2.at(r, c)) mu_blocks_equal = false;
    }
  }
  CHECK(mu_blocks_equal);
}

TEST_CASE("Cahn-Hilliard step conserves mass") {
  auto s = unit_space(16, 2);
  DecoupledScheme scheme(s, convergence_params(), config_with_dt(0.05));
  const State s0 = scheme.initial_state(interpolate(cosine_datum, s));
  const ChStepResult ch = scheme.ch_step(s0);
  const auto ones = std::vector<double>(s->n_dofs(), 1.0);
  const auto m1 = scheme.operators().mass * std::span<const double>(ones);
  double change = 0.0;
  for (std::size_t i = 0; i < s->n_dofs(); ++i) change += m1[i] * (ch.phi[i] - s0.phi[i]);
  CHECK(std::abs(change) <= 1e-12);
}

TEST_CASE("pressure update") {
  auto s = unit_space(8, 1);
  ModelParams params = convergence_params();
  {
    DecoupledScheme scheme(s, params, config_with_dt(0.1));
    const State s0 = scheme.initial_state(constant(s, 0.0));
    const PressureResult pr = scheme.pressure_update(s0, constant(s, 0.7));
    for (double v : pr.p.data()) CHECK(v == 0.0);
  }
  {
    // constant viscosity: (grad p^{n+1} + (gamma/eps) phi^n grad mu, grad q) = 0
    params.eta_model = ViscosityModel::Constant;
    DecoupledScheme scheme(s, params, config_with_dt(0.1));
    State s0 = scheme.initial_state(interpolate(cosine_datum, s));
    s0.p = interpolate([](double x, double y) { return x * y - 0.25; }, s);
    const FieldVector mu = interpolate([](double x, double y) { return std::sin(3 * x) + y * y; }, s);
    const PressureResult pr = scheme.pressure_update(s0, mu);
    CHECK(pr.cg.converged);
    const FormAssembler& a = scheme.assembler();
    QpVectorField g = a.gradients_at_qp(mu.coefficients());
    const QpField phi = a.values_at_qp(s0.phi.coefficients());
    for (std::size_t q = 0; q < g.values.size(); ++q) {
      g.values[q][0] *= params.gamma / params.epsilon * phi.values[q];
      g.values[q][1] *= params.gamma / params.epsilon * phi.values[q];
    }
    const auto couple = a.gradient_load(g);
    auto res = scheme.operators().stiffness * pr.p.coefficients();
    for (std::size_t i = 0; i < res.size(); ++i) res[i] += couple[i];
    CHECK(norm2(res) <= 1e-9 * norm2(couple));
    CHECK(std::abs(weighted_mean(pr.p.coefficients(), scheme.operators().lumped_mass)) <= 1e-12);

    // the right side vanishes on the constant test function
    double sum = 0.0, abs_sum = 0.0;
    for (double b : couple) {
      sum += b;
      abs_sum += std::abs(b);
    }
    CHECK(std::abs(sum) <= 1e-14 * abs_sum);
  }
}

TEST_CASE("velocity reconstruction") {
  auto s = unit_space(6, 2);
  ModelParams params = convergence_params();
  params.eta_model = ViscosityModel::Constant;
  DecoupledScheme scheme(s, params, config_with_dt(0.1));
  State s0 = scheme.initial_state(constant(s, 0.0));
  s0.p = interpolate([](double x, double) { return x; }, s);
  const VelocityField vel = scheme.reconstruct_velocity(s0, constant(s, 0.2));
  for (const auto& u : vel.u.values) {
    CHECK(u[0] == Approx(-1.0 / (12.0 * params.eta1)).epsilon(1e-12));
    CHECK(std::abs(u[1]) <= 1e-12);
  }

  // ||sqrt(eta) u||^2 against a loop over elements and quadrature points
  params.eta_model = ViscosityModel::LinearTruncated;
  DecoupledScheme s2(s, params, config_with_dt(0.1));
  State st = s2.initial_state(FieldVector(s, random_vector(s->n_dofs(), 12, -1.2, 1.2)));
  st.p = FieldVector(s, random_vector(s->n_dofs(), 13));
  const FieldVector mu(s, random_vector(s->n_dofs(), 14));
  const VelocityField v2 = s2.reconstruct_velocity(st, mu);

  const Tabulation tab(s->element(), QuadratureRule::triangle(8));
  double oracle = 0.0;
  for (std::size_t e = 0; e < s->n_elements(); ++e) {
    const auto dofs = s->element_dofs(e);
    const auto& g = s->geometry(e);
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      double phi = 0.0, gp[2] = {0, 0}, gm[2] = {0, 0};
      for (int i = 0; i < tab.n_local; ++i) {
        const auto d = g.physical_gradient(tab.gradient(q, i));
        phi += st.phi[dofs[i]] * tab.value(q, i);
        gp[0] += st.p[dofs[i]] * d[0];
        gp[1] += st.p[dofs[i]] * d[1];
        gm[0] += mu[dofs[i]] * d[0];
        gm[1] += mu[dofs[i]] * d[1];
      }
      const double eta = eta_of_phi(phi, params);
      const double c = params.gamma / params.epsilon * phi;
      const double ux = -(gp[0] + c * gm[0]) / (12 * eta);
      const double uy = -(gp[1] + c * gm[1]) / (12 * eta);
      oracle += tab.rule.weights[q] * g.det * eta * (ux * ux + uy * uy);
    }
  }
  CHECK(v2.eta_weighted_norm_sq == Approx(oracle).epsilon(1e-12));
}

TEST_CASE("modified energy decreases at every step for k = 0.1") {
  auto s = unit_space(64, 1);
  DecoupledScheme scheme(s, convergence_params(), config_with_dt(0.1));
  State st = scheme.initial_state(interpolate(cosine_datum, s));
  double previous = scheme.energies().modified_energy(st.phi.coefficients(), st.p.coefficients(), 0.1);
  for (int n = 0; n < 20; ++n) {
    StepResult r = scheme.advance(st);
    INFO("step " << r.state.step);
    CHECK(r.diagnostics.modified_energy <= previous + 1e-10);
    CHECK(r.diagnostics.energy_law_residual <= 1e-8 * (1.0 + std::abs(r.diagnostics.modified_energy)));
    CHECK(r.diagnostics.convex_split_violation <= 1e-12);
    CHECK(std::abs(weighted_mean(r.state.p.coefficients(), scheme.operators().lumped_mass)) <= 1e-10);
    previous = r.diagnostics.modified_energy;
    st = std::move(r.state);
  }
}

TEST_CASE("identical inputs give bit-identical diagnostics") {
  auto run = [] {
    auto s = unit_space(12, 2);
    DecoupledScheme scheme(s, convergence_params(), config_with_dt(0.02));
    State st = scheme.initial_state(interpolate(cosine_datum, s));
    std::vector<double> out;
    for (int n = 0; n < 3; ++n) {
      StepResult r = scheme.advance(st);
      out.insert(out.end(), {r.diagnostics.energy, r.diagnostics.modified_energy, r.diagnostics.mass,
                             r.diagnostics.energy_law_residual});
      st = std::move(r.state);
    }
    return out;
  };
  CHECK(run() == run());
}

TEST_CASE("Newton failure surfaces as a step error with the step index") {
  auto s = unit_space(8, 1);
  SchemeConfig cfg = config_with_dt(0.5);
  cfg.newton_max_iter = 1;
  cfg.newton_tol = 1e-30;
  DecoupledScheme scheme(s, convergence_params(), cfg);
  const State s0 = scheme.initial_state(interpolate(cosine_datum, s));
  try {
    scheme.advance(s0);
    FAIL("expected StepError");
  } catch (const StepError& e) {
    CHECK(e.step() == 1);
    CHECK(e.residual_norm() > 0.0);
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}
