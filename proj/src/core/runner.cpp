// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "core/errors.hpp"
#include "core/scenarios.hpp"
#include "core/vtk_writer.hpp"

namespace chhs {

namespace fs = std::filesystem;

StepDiagnostics initial_diagnostics(const DecoupledScheme& scheme, const State& s) {
  const EnergyEvaluator& e = scheme.energies();
  StepDiagnostics d;
  d.step = s.step;
  d.time = s.time;
  d.energy = e.energy(s.phi.coefficients());
  d.modified_energy = e.modified_energy(s.phi.coefficients(), s.p.coefficients(), scheme.config().dt);
  d.surface_energy = e.surface_energy_scaled(s.phi.coefficients());
  d.mass = e.mass(s.phi.coefficients());
  return d;
}

namespace {

void make_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fields_%06d.vtk", step);
  return buf;
}

}  // namespace

RunSummary run(const RunConfig& cfg, const RunOptions& options) {
  cfg.validate();
  SchemeConfig sc = cfg.scheme;
  sc.dt = cfg.time_step();
  auto space = make_space(cfg);
  DecoupledScheme scheme(space, cfg.model, sc);
  State state = scheme.initial_state(initial_condition(cfg, space));
  const int steps = options.steps ? *options.steps : cfg.step_count();
  if (steps < 0) throw ConfigError("step count must be >= 0");

  RunSummary summary;
  summary.phi_bar = scheme.phi_bar();

  const fs::path dir(cfg.output_dir);
  std::ofstream csv;
  if (options.write_files) {
    make_output_dir(cfg.output_dir);
    write_text(dir / "run.cfg", echo(cfg));
    csv.open(dir / "diagnostics.csv");
    if (!csv) throw IoError("cannot open '" + (dir / "diagnostics.csv").string() + "' for writing");
    csv << diagnostics_csv_header() << '\n';
  }
  auto record = [&](const State& s, const StepDiagnostics& d, const VelocityField& vel) {
    summary.history.push_back(d);
    if (options.observer) options.observer(s, d);
    if (!options.write_files) return;
    csv << diagnostics_csv_row(d) << '\n';
    csv.flush();
    if (!csv) throw IoError("write to diagnostics.csv failed");
    if (s.step % cfg.output_cadence == 0 || s.step == steps) {
      const auto u = nodal_velocity(scheme.assembler(), scheme.operators(), vel.u);
      write_fields((dir / snapshot_name(s.step)).string(), s, &u);
    }
  };

  record(state, initial_diagnostics(scheme, state), scheme.reconstruct_velocity(state, state.mu));
  if (options.log) {
    *options.log << "chhs: " << to_string(cfg.scenario) << ", " << space->n_dofs() << " dofs (P" << cfg.order
                 << "), dt = " << sc.dt << ", " << steps << " steps\n";
  }
  const int every = std::max(1, steps / 20);
  for (int n = 0; n < steps; ++n) {
    StepResult r = scheme.advance(state);
    state = std::move(r.state);
    record(state, r.diagnostics, r.velocity);
    if (options.log && ((n + 1) % every == 0 || n + 1 == steps)) {
      const auto& d = r.diagnostics;
      *options.log << "step " << d.step << "/" << steps << " t=" << d.time << " E=" << d.energy
                   << " E_app=" << d.modified_energy << " newton=" << d.newton_iterations
                   << " cg=" << d.cg_iterations << '\n';
    }
  }
  summary.steps = steps;
  summary.final_state = std::move(state);
  return summary;
}

ConvergenceTable convergence_harness(const RunConfig& base, const std::vector<int>& levels, const RunOptions& options) {
  if (levels.size() < 3) throw ConfigError("convergence harness needs at least 3 levels for one rate");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] != 2 * levels[i - 1]) throw ConfigError("convergence levels must double from one to the next");
  }
  if (!base.dt_over_h) throw ConfigError("convergence harness needs dt_over_h (linear refinement path)");

  ConvergenceTable t;
  t.levels = levels;
  std::optional<State> previous;
  for (int n : levels) {
    RunConfig cfg = base;
    cfg.n = n;
    RunOptions opt = options;
    opt.steps.reset();
    if (options.write_files) cfg.output_dir = (fs::path(base.output_dir) / ("n" + std::to_string(n))).string();
    RunSummary s = run(cfg, opt);
    State fine = std::move(*s.final_state);
    if (previous) {
      const SpaceOperators fine_ops = make_space_operators(fine.phi.space());
      const SpaceOperators coarse_ops = make_space_operators(previous->phi.space());
      ConvergencePair pair;
      pair.coarse = n / 2;
      pair.fine = n;
      pair.on_coarse = {cauchy_difference_on_coarse(previous->phi, fine.phi, coarse_ops),
                        cauchy_difference_on_coarse(previous->p, fine.p, coarse_ops)};
      pair.on_fine = {cauchy_difference(previous->phi, fine.phi, fine_ops),
                      cauchy_difference(previous->p, fine.p, fine_ops)};
      t.pairs.push_back(pair);
      if (options.log) {
        const auto& c = pair.on_coarse;
        *options.log << "pair " << pair.coarse << "-" << pair.fine << ": phi H1 " << c.phi.h1 << " L2 " << c.phi.l2
                     << ", p H1 " << c.p.h1 << " L2 " << c.p.l2 << '\n';
      }
    }
    previous = std::move(fine);
  }
  auto rate = [](double a, double b) { return std::log2(a / b); };
  for (auto m : {CauchyMeasure::Coarse, CauchyMeasure::Fine}) {
    RateSet& r = m == CauchyMeasure::Coarse ? t.coarse_rates : t.fine_rates;
    for (std::size_t i = 0; i + 1 < t.pairs.size(); ++i) {
      const auto& a = t.pairs[i].get(m);
      const auto& b = t.pairs[i + 1].get(m);
      r.phi_h1.push_back(rate(a.phi.h1, b.phi.h1));
      r.phi_l2.push_back(rate(a.phi.l2, b.phi.l2));
      r.p_h1.push_back(rate(a.p.h1, b.p.h1));
      r.p_l2.push_back(rate(a.p.l2, b.p.l2));
    }
  }
  if (options.write_files) {
    make_output_dir(base.output_dir);
    write_text(fs::path(base.output_dir) / "convergence.txt", format_table(t));
  }
  return t;
}

std::string format_table(const ConvergenceTable& t) {
  std::ostringstream o;
  char buf[64];
  auto row = [&](const char* label, auto diff, const std::vector<double>& rates) {
    o << label;
    for (std::size_t i = 0; i < t.pairs.size(); ++i) {
      std::snprintf(buf, sizeof buf, "  %10.3e", diff(t.pairs[i]));
      o << buf;
      if (i < rates.size()) {
        std::snprintf(buf, sizeof buf, "  %5.2f", rates[i]);
        o << buf;
      }
    }
    o << '\n';
  };
  auto header = [&](const std::string& title) {
    o << title << '\n' << "     ";
    for (std::size_t i = 0; i < t.pairs.size(); ++i) {
      std::snprintf(buf, sizeof buf, "  %10s", (std::to_string(t.pairs[i].coarse) + "-" + std::to_string(t.pairs[i].fine)).c_str());
      o << buf;
      if (i + 1 < t.pairs.size()) o << "   rate";
    }
    o << '\n';
  };
  for (auto m : {CauchyMeasure::Coarse, CauchyMeasure::Fine}) {
    const std::string where = m == CauchyMeasure::Coarse ? " (fine solution restricted to the coarse mesh)"
                                                         : " (coarse solution prolonged to the fine mesh)";
    const RateSet& r = t.rates(m);
    header("H1 Cauchy differences" + where);
    row("phi  ", [m](const ConvergencePair& p) { return p.get(m).phi.h1; }, r.phi_h1);
    row("p    ", [m](const ConvergencePair& p) { return p.get(m).p.h1; }, r.p_h1);
    header("L2 Cauchy differences" + where);
    row("phi  ", [m](const ConvergencePair& p) { return p.get(m).phi.l2; }, r.phi_l2);
    row("p    ", [m](const ConvergencePair& p) { return p.get(m).p.l2; }, r.p_l2);
    if (m == CauchyMeasure::Coarse) o << '\n';
  }
  return o.str();
}

EnergyCheckReport check_energy(const RunConfig& cfg, const RunOptions& options) {
  if (cfg.model.lambda != 0.0) throw ConfigError("check-energy requires lambda = 0 (the energy law has no body force)");
  EnergyCheckReport rep;
  rep.tolerance = cfg.energy_tolerance;
  RunOptions opt = options;
  if (cfg.check_steps > 0) opt.steps = cfg.check_steps;
  opt.observer = [&](const State& s, const StepDiagnostics& d) {
    if (options.observer) options.observer(s, d);
    if (s.step == 0) return;
    const double ratio = d.energy_law_residual / (1.0 + std::abs(d.modified_energy));
    if (rep.steps == 0 || ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_step = s.step;
    }
    if (ratio > rep.tolerance) ++rep.violations;
    ++rep.steps;
  };
  run(cfg, opt);
  return rep;
}

}  // namespace chhs
