// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "chhs/chhs.h"

#include <cstring>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "core/errors.hpp"
#include "core/level_set.hpp"
#include "core/run_config.hpp"
#include "core/runner.hpp"
#include "core/scenarios.hpp"
#include "core/scheme.hpp"
#include "core/vtk_writer.hpp"

struct chhs_config {
  chhs::RunConfig cfg;
};

struct chhs_simulation {
  chhs::RunConfig cfg;
  std::unique_ptr<chhs::DecoupledScheme> scheme;
  std::optional<chhs::State> state;
  chhs::StepDiagnostics diagnostics;
  chhs::VelocityField velocity;
};

struct chhs_convergence {
  chhs::ConvergenceTable table;
};

namespace {

thread_local std::string last_error;

chhs_status fail(chhs_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

chhs_status status_of(chhs::ErrorKind k) {
  switch (k) {
    case chhs::ErrorKind::Configuration: return CHHS_ERR_CONFIG;
    case chhs::ErrorKind::Unsupported: return CHHS_ERR_UNSUPPORTED;
    case chhs::ErrorKind::Assembly: return CHHS_ERR_ASSEMBLY;
    case chhs::ErrorKind::Solver: return CHHS_ERR_SOLVER;
    case chhs::ErrorKind::Io: return CHHS_ERR_IO;
    case chhs::ErrorKind::EnergyLaw: return CHHS_ERR_ENERGY_LAW;
  }
  return CHHS_ERR_INTERNAL;
}

template <class F>
chhs_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const chhs::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(CHHS_ERR_INTERNAL, std::string("internal error: ") + e.what());
  } catch (...) {
    return fail(CHHS_ERR_INTERNAL, "internal error: unknown exception");
  }
}

chhs_status copy_text(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf && cap > 0) {
    const size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return CHHS_OK;
}

void fill(chhs_diagnostics* out, const chhs::StepDiagnostics& d) {
  out->step = d.step;
  out->time = d.time;
  out->energy = d.energy;
  out->modified_energy = d.modified_energy;
  out->surface_energy = d.surface_energy;
  out->mass = d.mass;
  out->energy_law_residual = d.energy_law_residual;
  out->newton_iters = d.newton_iterations;
  out->cg_iters = d.cg_iterations;
  out->convex_split_violation = d.convex_split_violation;
}

#define CHHS_REQUIRE(cond, what) \
  if (!(cond)) return fail(CHHS_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* chhs_version(void) { return "0.1.0"; }

const char* chhs_status_string(chhs_status s) {
  switch (s) {
    case CHHS_OK: return "ok";
    case CHHS_ERR_CONFIG: return "configuration error";
    case CHHS_ERR_SOLVER: return "solver error";
    case CHHS_ERR_IO: return "I/O error";
    case CHHS_ERR_UNSUPPORTED: return "unsupported operation";
    case CHHS_ERR_ASSEMBLY: return "assembly error";
    case CHHS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CHHS_ERR_ENERGY_LAW: return "energy law violation";
    case CHHS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* chhs_last_error(void) { return last_error.c_str(); }

chhs_status chhs_config_create(const char* scenario, chhs_config** out) {
  CHHS_REQUIRE(scenario && out, "chhs_config_create: null argument");
  return guarded([&] {
    *out = new chhs_config{chhs::preset(chhs::scenario_from_string(scenario))};
    return CHHS_OK;
  });
}

chhs_status chhs_config_load(const char* path, chhs_config** out) {
  CHHS_REQUIRE(path && out, "chhs_config_load: null argument");
  return guarded([&] {
    *out = new chhs_config{chhs::load_config(path)};
    return CHHS_OK;
  });
}

chhs_status chhs_config_parse(const char* text, chhs_config** out) {
  CHHS_REQUIRE(text && out, "chhs_config_parse: null argument");
  return guarded([&] {
    std::istringstream in(text);
    *out = new chhs_config{chhs::parse_config(in)};
    return CHHS_OK;
  });
}

chhs_status chhs_config_set(chhs_config* config, const char* key, const char* value) {
  CHHS_REQUIRE(config && key && value, "chhs_config_set: null argument");
  return guarded([&] {
    if (std::string(key) == "scenario") {
      config->cfg = chhs::preset(chhs::scenario_from_string(value));
    } else {
      chhs::set_value(config->cfg, key, value);
    }
    return CHHS_OK;
  });
}

chhs_status chhs_config_validate(const chhs_config* config) {
  CHHS_REQUIRE(config, "chhs_config_validate: null config");
  return guarded([&] {
    config->cfg.validate();
    return CHHS_OK;
  });
}

chhs_status chhs_config_echo(const chhs_config* config, char* buf, size_t cap, size_t* needed) {
  CHHS_REQUIRE(config, "chhs_config_echo: null config");
  return guarded([&] { return copy_text(chhs::echo(config->cfg), buf, cap, needed); });
}

void chhs_config_destroy(chhs_config* config) { delete config; }

chhs_status chhs_simulation_create(const chhs_config* config, chhs_simulation** out) {
  CHHS_REQUIRE(config && out, "chhs_simulation_create: null argument");
  return guarded([&] {
    const chhs::RunConfig& cfg = config->cfg;
    cfg.validate();
    auto sim = std::make_unique<chhs_simulation>();
    sim->cfg = cfg;
    chhs::SchemeConfig sc = cfg.scheme;
    sc.dt = cfg.time_step();
    auto space = chhs::make_space(cfg);
    sim->scheme = std::make_unique<chhs::DecoupledScheme>(space, cfg.model, sc);
    sim->state = sim->scheme->initial_state(chhs::initial_condition(cfg, space));
    sim->diagnostics = chhs::initial_diagnostics(*sim->scheme, *sim->state);
    sim->velocity = sim->scheme->reconstruct_velocity(*sim->state, sim->state->mu);
    *out = sim.release();
    return CHHS_OK;
  });
}

chhs_status chhs_simulation_step(chhs_simulation* sim, chhs_diagnostics* diag) {
  CHHS_REQUIRE(sim, "chhs_simulation_step: null simulation");
  return guarded([&] {
    chhs::StepResult r = sim->scheme->advance(*sim->state);
    sim->state = std::move(r.state);
    sim->diagnostics = r.diagnostics;
    sim->velocity = std::move(r.velocity);
    if (diag) fill(diag, sim->diagnostics);
    return CHHS_OK;
  });
}

chhs_status chhs_simulation_diagnostics(const chhs_simulation* sim, chhs_diagnostics* diag) {
  CHHS_REQUIRE(sim && diag, "chhs_simulation_diagnostics: null argument");
  fill(diag, sim->diagnostics);
  return CHHS_OK;
}

chhs_status chhs_simulation_num_dofs(const chhs_simulation* sim, size_t* n) {
  CHHS_REQUIRE(sim && n, "chhs_simulation_num_dofs: null argument");
  *n = sim->scheme->space().n_dofs();
  return CHHS_OK;
}

chhs_status chhs_simulation_get_field(const chhs_simulation* sim, chhs_field field, double* out, size_t n) {
  CHHS_REQUIRE(sim && out, "chhs_simulation_get_field: null argument");
  const chhs::State& s = *sim->state;
  const chhs::FieldVector* f = nullptr;
  switch (field) {
    case CHHS_FIELD_PHI: f = &s.phi; break;
    case CHHS_FIELD_MU: f = &s.mu; break;
    case CHHS_FIELD_P: f = &s.p; break;
  }
  CHHS_REQUIRE(f, "chhs_simulation_get_field: unknown field");
  CHHS_REQUIRE(n == f->size(), "chhs_simulation_get_field: buffer length must equal the number of dofs");
  std::copy(f->data().begin(), f->data().end(), out);
  return CHHS_OK;
}

chhs_status chhs_simulation_dof_coordinates(const chhs_simulation* sim, double* xy, size_t n) {
  CHHS_REQUIRE(sim && xy, "chhs_simulation_dof_coordinates: null argument");
  const auto coords = sim->scheme->space().dof_coords();
  CHHS_REQUIRE(n == coords.size(), "chhs_simulation_dof_coordinates: n must equal the number of dofs");
  for (size_t i = 0; i < n; ++i) {
    xy[2 * i] = coords[i].x;
    xy[2 * i + 1] = coords[i].y;
  }
  return CHHS_OK;
}

chhs_status chhs_simulation_level_set(const chhs_simulation* sim, int* open_curves, int* closed_loops) {
  CHHS_REQUIRE(sim, "chhs_simulation_level_set: null simulation");
  return guarded([&] {
    const chhs::LevelSetTopology t = chhs::zero_level_set_topology(sim->state->phi);
    if (open_curves) *open_curves = t.open_curves;
    if (closed_loops) *closed_loops = t.closed_loops;
    return CHHS_OK;
  });
}

chhs_status chhs_simulation_write_vtk(const chhs_simulation* sim, const char* path) {
  CHHS_REQUIRE(sim && path, "chhs_simulation_write_vtk: null argument");
  return guarded([&] {
    const auto u = chhs::nodal_velocity(sim->scheme->assembler(), sim->scheme->operators(), sim->velocity.u);
    chhs::write_fields(path, *sim->state, &u);
    return CHHS_OK;
  });
}

void chhs_simulation_destroy(chhs_simulation* sim) { delete sim; }

chhs_status chhs_run(const chhs_config* config, int verbose, int* steps_done) {
  CHHS_REQUIRE(config, "chhs_run: null config");
  return guarded([&] {
    chhs::RunOptions opt;
    if (verbose) opt.log = &std::cerr;
    const chhs::RunSummary s = chhs::run(config->cfg, opt);
    if (steps_done) *steps_done = s.steps;
    return CHHS_OK;
  });
}

chhs_status chhs_converge(const chhs_config* config, int verbose, chhs_convergence** out) {
  CHHS_REQUIRE(config && out, "chhs_converge: null argument");
  return guarded([&] {
    chhs::RunOptions opt;
    if (verbose) opt.log = &std::cerr;
    opt.write_files = true;
    auto t = std::make_unique<chhs_convergence>();
    t->table = chhs::convergence_harness(config->cfg, config->cfg.levels, opt);
    *out = t.release();
    return CHHS_OK;
  });
}

size_t chhs_convergence_num_pairs(const chhs_convergence* table) { return table ? table->table.pairs.size() : 0; }

namespace {

chhs::CauchyMeasure to_measure(chhs_cauchy_measure m) {
  return m == CHHS_MEASURE_FINE ? chhs::CauchyMeasure::Fine : chhs::CauchyMeasure::Coarse;
}

}  // namespace

chhs_status chhs_convergence_get_pair(const chhs_convergence* table, size_t i, chhs_cauchy_measure measure,
                                      chhs_convergence_pair* out) {
  CHHS_REQUIRE(table && out, "chhs_convergence_get_pair: null argument");
  CHHS_REQUIRE(i < table->table.pairs.size(), "chhs_convergence_get_pair: index out of range");
  CHHS_REQUIRE(measure == CHHS_MEASURE_COARSE || measure == CHHS_MEASURE_FINE, "chhs_convergence_get_pair: bad measure");
  const auto& pair = table->table.pairs[i];
  const auto& n = pair.get(to_measure(measure));
  *out = {pair.coarse, pair.fine, n.phi.h1, n.phi.l2, n.phi.h1_semi, n.p.h1, n.p.l2, n.p.h1_semi};
  return CHHS_OK;
}

chhs_status chhs_convergence_get_rate(const chhs_convergence* table, size_t i, chhs_cauchy_measure measure,
                                      double* phi_h1, double* phi_l2, double* p_h1, double* p_l2) {
  CHHS_REQUIRE(table, "chhs_convergence_get_rate: null table");
  CHHS_REQUIRE(measure == CHHS_MEASURE_COARSE || measure == CHHS_MEASURE_FINE, "chhs_convergence_get_rate: bad measure");
  const auto& r = table->table.rates(to_measure(measure));
  CHHS_REQUIRE(i < r.phi_h1.size(), "chhs_convergence_get_rate: index out of range");
  if (phi_h1) *phi_h1 = r.phi_h1[i];
  if (phi_l2) *phi_l2 = r.phi_l2[i];
  if (p_h1) *p_h1 = r.p_h1[i];
  if (p_l2) *p_l2 = r.p_l2[i];
  return CHHS_OK;
}

chhs_status chhs_convergence_format(const chhs_convergence* table, char* buf, size_t cap, size_t* needed) {
  CHHS_REQUIRE(table, "chhs_convergence_format: null table");
  return guarded([&] { return copy_text(chhs::format_table(table->table), buf, cap, needed); });
}

void chhs_convergence_destroy(chhs_convergence* table) { delete table; }

chhs_status chhs_check_energy(const chhs_config* config, int verbose, chhs_energy_report* report) {
  CHHS_REQUIRE(config, "chhs_check_energy: null config");
  return guarded([&] {
    chhs::RunOptions opt;
    if (verbose) opt.log = &std::cerr;
    const chhs::EnergyCheckReport r = chhs::check_energy(config->cfg, opt);
    if (report) *report = {r.steps, r.violations, r.worst_step, r.worst_ratio, r.tolerance};
    if (!r.passed()) {
      std::ostringstream os;
      os << r.violations << " of " << r.steps << " steps violate the energy law (worst ratio " << r.worst_ratio
         << " at step " << r.worst_step << ", tolerance " << r.tolerance << ")";
      return fail(CHHS_ERR_ENERGY_LAW, os.str());
    }
    return CHHS_OK;
  });
}

}  // extern "C"
