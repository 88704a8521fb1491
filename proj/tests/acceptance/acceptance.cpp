// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. One PASS/FAIL line per criterion; details go to stdout
// above it, progress to stderr with --verbose.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "core/assembly.hpp"
#include "core/errors.hpp"
#include "core/level_set.hpp"
#include "core/linear_solvers.hpp"
#include "core/run_config.hpp"
#include "core/runner.hpp"
#include "core/scenarios.hpp"
#include "core/scheme.hpp"

using namespace chhs;

namespace {

std::vector<std::string> g_overrides;
std::ostream* g_log = nullptr;

void detail(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

bool verdict(int id, bool ok, const std::string& summary) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, summary.c_str());
  std::fflush(stdout);
  return ok;
}

RunConfig configure(Scenario s) {
  RunConfig cfg = preset(s);
  for (const auto& kv : g_overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value");
    set_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

RunOptions quiet_options() {
  RunOptions opt;
  opt.write_files = false;
  opt.log = g_log;
  return opt;
}

bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Cauchy convergence, differences on the coarse mesh.
bool criterion1() {
  RunConfig cfg = configure(Scenario::Convergence);
  std::vector<int> levels = cfg.levels;
  // the asserted p rate needs one level beyond the stated ones
  if (levels.size() == 3) levels.push_back(2 * levels.back());
  const ConvergenceTable t = convergence_harness(cfg, levels, quiet_options());
  std::printf("%s", format_table(t).c_str());

  const RateSet& r = t.coarse_rates;
  const double phi_h1 = r.phi_h1[0], phi_l2 = r.phi_l2[0];
  const double p_h1 = r.p_h1[1], p_l2 = r.p_l2[1];
  const double mag = t.pairs[0].on_coarse.phi.h1;
  const bool phi_ok = in_range(phi_h1, 0.85, 1.2) && in_range(phi_l2, 0.85, 1.2);
  const bool p_ok = in_range(p_h1, 0.8, 1.2) && in_range(p_l2, 0.8, 1.2);
  const bool mag_ok = std::abs(mag - 7.88e-2) <= 0.3 * 7.88e-2;
  detail("phi rate %d-%d/%d-%d: H1 %.3f, L2 %.3f (want [0.85, 1.2])", t.pairs[0].coarse, t.pairs[0].fine,
         t.pairs[1].coarse, t.pairs[1].fine, phi_h1, phi_l2);
  detail("p rate %d-%d/%d-%d: H1 %.3f, L2 %.3f (want [0.8, 1.2])", t.pairs[1].coarse, t.pairs[1].fine,
         t.pairs[2].coarse, t.pairs[2].fine, p_h1, p_l2);
  detail("phi H1 difference %d-%d: %.3e (want 7.88e-2 +- 30%%)", t.pairs[0].coarse, t.pairs[0].fine, mag);
  detail("prolonged to the fine mesh instead: phi H1 %.3e, rates H1 %.3f L2 %.3f", t.pairs[0].on_fine.phi.h1,
         t.fine_rates.phi_h1[0], t.fine_rates.phi_l2[0]);
  return verdict(1, phi_ok && p_ok && mag_ok,
                 fmt("phi rates H1 %.2f L2 %.2f, p rates H1 %.2f L2 %.2f, phi H1 diff %.3e", phi_h1, phi_l2, p_h1,
                     p_l2, mag));
}

// Modified energy law at every step for large and small k.
bool criterion2() {
  bool ok = true;
  double worst = -std::numeric_limits<double>::infinity();
  for (double k : {0.01, 0.1, 1.0}) {
    RunConfig cfg = configure(Scenario::Convergence);
    cfg.n = 64;
    cfg.dt_over_h.reset();
    cfg.scheme.dt = k;
    cfg.check_steps = 30;
    cfg.model.lambda = 0.0;
    try {
      const EnergyCheckReport rep = check_energy(cfg, quiet_options());
      worst = std::max(worst, rep.worst_ratio);
      detail("k = %g: %d steps, %d violations, worst residual/(1+|E_app|) %.3e at step %d", k, rep.steps,
             rep.violations, rep.worst_ratio, rep.worst_step);
      ok = ok && rep.passed() && rep.steps == cfg.check_steps;
    } catch (const StepError& e) {
      detail("k = %g: step %d failed: %s", k, e.step(), e.what());
      ok = false;
    }
  }
  return verdict(2, ok, fmt("worst energy-law ratio %.3e (tolerance 1e-8)", worst));
}

// Mass conservation and the initial mass of the P1 interpolant.
bool criterion3() {
  RunConfig cfg = configure(Scenario::Convergence);
  cfg.n = 128;
  cfg.dt_over_h.reset();
  cfg.scheme.dt = 1.0 / 128;
  RunOptions opt = quiet_options();
  opt.steps = 100;
  double drift = 0.0;
  double m0 = 0.0;
  opt.observer = [&](const State& s, const StepDiagnostics& d) {
    if (s.step == 0) m0 = d.mass;
    drift = std::max(drift, std::abs(d.mass - m0));
  };
  const RunSummary sum = run(cfg, opt);
  const bool drift_ok = drift <= 1e-9 && sum.steps == 100;
  const bool m0_ok = std::abs(m0 - 8.14e-6) <= 0.2 * 8.14e-6;
  detail("initial mass %.4e (want 8.14e-6 +- 20%%)", m0);
  detail("max |mass(n) - mass(0)| over %d steps: %.3e (want <= 1e-9)", sum.steps, drift);
  return verdict(3, drift_ok && m0_ok, fmt("initial mass %.3e, drift %.2e", m0, drift));
}

// E and E_app nonincreasing at h = sqrt2/128, k = 0.1.
bool criterion4() {
  RunConfig cfg = configure(Scenario::Convergence);
  cfg.n = 128;
  cfg.dt_over_h.reset();
  cfg.scheme.dt = 0.1;
  RunOptions opt = quiet_options();
  opt.steps = 50;
  StepDiagnostics prev;
  int bad_e = 0, bad_app = 0;
  double worst_e = -std::numeric_limits<double>::infinity(), worst_app = worst_e;
  opt.observer = [&](const State& s, const StepDiagnostics& d) {
    if (s.step > 0) {
      const double slack = 1e-8 * (1.0 + std::abs(prev.modified_energy));
      const double de = d.energy - prev.energy;
      const double dapp = d.modified_energy - prev.modified_energy;
      worst_e = std::max(worst_e, de);
      worst_app = std::max(worst_app, dapp);
      if (de > slack) ++bad_e;
      if (dapp > slack) ++bad_app;
    }
    prev = d;
  };
  const RunSummary sum = run(cfg, opt);
  detail("%d steps to t = %g: E %.6e -> %.6e, E_app -> %.6e", sum.steps, sum.steps * 0.1, sum.history.front().energy,
         sum.history.back().energy, sum.history.back().modified_energy);
  detail("largest step change: E %.3e, E_app %.3e", worst_e, worst_app);
  return verdict(4, bad_e == 0 && bad_app == 0 && sum.steps == 50,
                 fmt("%d increases of E, %d of E_app over %d steps", bad_e, bad_app, sum.steps));
}

// Spinodal ordering of the scaled surface energy.
bool criterion5() {
  const std::vector<double> gammas{0.0, 0.06, 0.12};
  int ordered = 0;
  int early_ok = 0;
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  for (std::uint64_t seed : seeds) {
    std::vector<std::vector<StepDiagnostics>> hist;
    for (double g : gammas) {
      RunConfig cfg = configure(Scenario::Spinodal);
      cfg.seed = seed;
      cfg.model.gamma = g;
      hist.push_back(run(cfg, quiet_options()).history);
    }
    const double dt = configure(Scenario::Spinodal).time_step();
    double early = 0.0;
    for (std::size_t i = 0; i < hist[0].size() && hist[0][i].time <= 1.0 + 1e-9 * dt; ++i) {
      for (std::size_t g = 1; g < gammas.size(); ++g) {
        early = std::max(early, std::abs(hist[g][i].surface_energy - hist[0][i].surface_energy) /
                                    hist[0][i].surface_energy);
      }
    }
    const double e0 = hist[0].back().surface_energy;
    const double e6 = hist[1].back().surface_energy;
    const double e12 = hist[2].back().surface_energy;
    const bool order = e12 <= e6 && e6 <= e0;
    ordered += order;
    early_ok += early <= 0.05;
    detail("seed %llu: E_free(t=%g) gamma 0: %.5f, 0.06: %.5f, 0.12: %.5f %s; early spread %.2f%%",
           static_cast<unsigned long long>(seed), hist[0].back().time, e0, e6, e12, order ? "ordered" : "NOT ordered",
           100.0 * early);
  }
  return verdict(5, ordered >= 4 && early_ok == static_cast<int>(seeds.size()),
                 fmt("ordering holds for %d of %zu seeds, early agreement within 5%% for %d", ordered, seeds.size(),
                     early_ok));
}

double neumann_l2_error(int n, int order) {
  using std::numbers::pi;
  auto space = std::make_shared<const FeSpace>(
      std::make_shared<const Mesh>(generate_uniform_mesh({0.0, 1.0, 0.0, 1.0}, n)), order);
  FormAssembler a(*space);
  const auto pts = a.qp_coordinates();
  auto exact = [](Point2 p) { return std::cos(pi * p.x) * std::cos(pi * p.y); };
  QpField f{a.points_per_element(), std::vector<double>(pts.size())};
  for (std::size_t q = 0; q < pts.size(); ++q) f.values[q] = 2.0 * pi * pi * exact(pts[q]);
  const auto lumped = a.mass().row_sums();
  const CgResult r = cg_solve(a.stiffness(), a.value_load(f), 1e-12, 20000, true, lumped);
  if (!r.report.converged) throw SolverError("Neumann solve did not converge");
  const QpField u = a.values_at_qp(r.x);
  double err = 0.0;
  for (std::size_t q = 0; q < pts.size(); ++q) err += a.qp_measure()[q] * std::pow(u.values[q] - exact(pts[q]), 2);
  return std::sqrt(err);
}

// Solver oracles.
bool criterion6() {
  bool ok = true;

  const double e8 = neumann_l2_error(8, 1), e16 = neumann_l2_error(16, 1), e32 = neumann_l2_error(32, 1);
  const double r1 = std::log2(e8 / e16), r2 = std::log2(e16 / e32);
  const bool poisson_ok = std::abs(r1 - 2.0) <= 0.2 && std::abs(r2 - 2.0) <= 0.2;
  detail("Neumann Poisson P1 L2 errors %.3e %.3e %.3e, rates %.3f %.3f (want 2 +- 0.2)", e8, e16, e32, r1, r2);
  ok = ok && poisson_ok;

  double jac_worst = 0.0;
  for (int order : {1, 2}) {
    auto space = std::make_shared<const FeSpace>(
        std::make_shared<const Mesh>(generate_uniform_mesh({0.0, 1.0, 0.0, 1.0}, 4)), order);
    FormAssembler a(*space);
    std::vector<double> phi(space->n_dofs());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = std::sin(1.7 * i + 0.3);
    std::vector<double> load;
    SparseMatrix jac;
    a.cubic_term(phi, load, jac);
    const double h = 1e-6;
    for (std::size_t j = 0; j < phi.size(); ++j) {
      auto plus = phi, minus = phi;
      plus[j] += h;
      minus[j] -= h;
      const auto fp = a.cubic_load(plus), fm = a.cubic_load(minus);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < phi.size(); ++i) {
        const double exact = jac.at(static_cast<int>(i), static_cast<int>(j));
        num = std::max(num, std::abs((fp[i] - fm[i]) / (2 * h) - exact));
        den = std::max(den, std::abs(exact));
      }
      jac_worst = std::max(jac_worst, num / den);
    }
  }
  detail("cubic Jacobian vs central differences: worst relative error %.3e (want <= 1e-5)", jac_worst);
  ok = ok && jac_worst <= 1e-5;

  double fixed_worst = 0.0;
  for (int order : {1, 2}) {
    for (double c : {-1.0, -0.4, 0.3, 1.0}) {
      RunConfig cfg = configure(Scenario::Convergence);
      cfg.n = 8;
      cfg.order = order;
      cfg.dt_over_h.reset();
      cfg.scheme.dt = 0.1;
      auto space = make_space(cfg);
      DecoupledScheme scheme(space, cfg.model, cfg.scheme);
      State s = scheme.initial_state(interpolate([c](double, double) { return c; }, space));
      for (int step = 0; step < 3; ++step) s = scheme.advance(s).state;
      for (double v : s.phi.coefficients()) fixed_worst = std::max(fixed_worst, std::abs(v - c));
      for (double v : s.p.coefficients()) fixed_worst = std::max(fixed_worst, std::abs(v));
    }
  }
  detail("constant states after 3 steps: max deviation %.3e (want <= 1e-12)", fixed_worst);
  ok = ok && fixed_worst <= 1e-12;

  RunConfig cfg = configure(Scenario::Convergence);
  cfg.n = 32;
  RunOptions opt = quiet_options();
  opt.steps = 50;
  double split_worst = -std::numeric_limits<double>::infinity();
  opt.observer = [&](const State& s, const StepDiagnostics& d) {
    if (s.step > 0) split_worst = std::max(split_worst, d.convex_split_violation);
  };
  run(cfg, opt);
  detail("convex splitting gap over 50 steps: max %.3e (want <= 0 up to 1e-12)", split_worst);
  ok = ok && split_worst <= 1e-12;

  return verdict(6, ok, fmt("Poisson rates %.2f %.2f, Jacobian %.1e, fixed points %.1e, split gap %.1e", r1, r2,
                            jac_worst, fixed_worst, split_worst));
}

struct StopRun {};

// Break-up of the light layer into drops. The run stops at the first loop.
bool criterion7() {
  RunConfig cfg = configure(Scenario::InterfaceBreakup);
  int check_every = 10;
  RunOptions opt = quiet_options();
  LevelSetTopology initial;
  int first_loop_step = -1;
  double first_loop_time = 0.0;
  LevelSetTopology at_loop;
  LevelSetTopology last;
  int last_step = 0;
  opt.observer = [&](const State& s, const StepDiagnostics&) {
    if (s.step % check_every != 0 && s.step != cfg.step_count()) return;
    last = zero_level_set_topology(s.phi);
    last_step = s.step;
    if (s.step == 0) initial = last;
    if (first_loop_step < 0 && last.closed_loops > 0) {
      first_loop_step = s.step;
      first_loop_time = s.time;
      at_loop = last;
    }
    if (g_log && s.step % 100 == 0) {
      *g_log << "t = " << s.time << ": " << last.open_curves << " open, " << last.closed_loops << " closed\n";
    }
    if (first_loop_step >= 0) throw StopRun{};
  };
  bool solver_ok = true;
  try {
    run(cfg, opt);
  } catch (const StepError& e) {
    detail("step %d failed: %s", e.step(), e.what());
    solver_ok = false;
  } catch (const StopRun&) {
  }
  detail("mesh n = %d, P%d, up to %zu steps of k = %g (t = %g)", cfg.n, cfg.order,
         static_cast<std::size_t>(cfg.step_count()), cfg.time_step(), cfg.step_count() * cfg.time_step());
  detail("initial zero level set: %d open curves, %d closed loops", initial.open_curves, initial.closed_loops);
  if (first_loop_step >= 0) {
    detail("first closed loop at step %d (t = %g): %d open, %d closed", first_loop_step, first_loop_time,
           at_loop.open_curves, at_loop.closed_loops);
  }
  detail("last checked (step %d): %d open curves, %d closed loops", last_step, last.open_curves, last.closed_loops);
  const bool ok = solver_ok && initial.open_curves == 2 && initial.closed_loops == 0 && first_loop_step >= 0;
  return verdict(7, ok,
                 first_loop_step >= 0 ? fmt("2 open curves -> %d closed loops at t = %g", at_loop.closed_loops, first_loop_time)
                                      : std::string("no closed loop formed"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chhs acceptance suite"};
  std::vector<int> criteria;
  bool verbose = false;
  app.add_option("-c,--criterion", criteria, "Criteria to check (default: all)")->check(CLI::Range(1, 7));
  app.add_option("--set", g_overrides, "key=value applied to every scenario preset");
  app.add_flag("-v,--verbose", verbose, "Progress on stderr");
  CLI11_PARSE(app, argc, argv);
  if (criteria.empty()) criteria = {1, 2, 3, 4, 5, 6, 7};
  if (verbose) g_log = &std::cerr;

  bool (*table[])() = {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7};
  bool all = true;
  for (int c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = table[c - 1]();
    } catch (const std::exception& e) {
      ok = verdict(c, false, std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("    (%.1f s)\n", secs);
    all = all && ok;
  }
  return all ? 0 : 1;
}
