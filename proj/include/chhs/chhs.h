/*
 * Copyright 2026 The chhs Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the Cahn-Hilliard-Hele-Shaw solver library.
 *
 * Every function returning chhs_status reports failures through the status
 * code and a thread-local message available from chhs_last_error(). Handles
 * are opaque; destroy functions accept NULL.
 */
#ifndef CHHS_CHHS_H
#define CHHS_CHHS_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(CHHS_BUILDING_LIBRARY)
#define CHHS_API __declspec(dllexport)
#else
#define CHHS_API __declspec(dllimport)
#endif
#else
#define CHHS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum chhs_status {
  CHHS_OK = 0,
  CHHS_ERR_CONFIG = 1,
  CHHS_ERR_SOLVER = 2,
  CHHS_ERR_IO = 3,
  CHHS_ERR_UNSUPPORTED = 4,
  CHHS_ERR_ASSEMBLY = 5,
  CHHS_ERR_INVALID_ARGUMENT = 6,
  CHHS_ERR_ENERGY_LAW = 7,
  CHHS_ERR_INTERNAL = 8
} chhs_status;

typedef enum chhs_field { CHHS_FIELD_PHI = 0, CHHS_FIELD_MU = 1, CHHS_FIELD_P = 2 } chhs_field;

typedef struct chhs_config chhs_config;
typedef struct chhs_simulation chhs_simulation;
typedef struct chhs_convergence chhs_convergence;

typedef struct chhs_diagnostics {
  int step;
  double time;
  double energy;
  double modified_energy;
  double surface_energy;
  double mass;
  double energy_law_residual;
  int newton_iters;
  int cg_iters;
  double convex_split_violation;
} chhs_diagnostics;

/* Where successive solutions are compared. */
typedef enum chhs_cauchy_measure {
  CHHS_MEASURE_COARSE = 0, /* fine solution restricted to the coarse mesh */
  CHHS_MEASURE_FINE = 1    /* coarse solution prolonged to the fine mesh */
} chhs_cauchy_measure;

typedef struct chhs_convergence_pair {
  int coarse;
  int fine;
  double phi_h1;
  double phi_l2;
  double phi_h1_semi;
  double p_h1;
  double p_l2;
  double p_h1_semi;
} chhs_convergence_pair;

typedef struct chhs_energy_report {
  int steps;
  int violations;
  int worst_step;
  double worst_ratio; /* max of residual / (1 + |E_app|) */
  double tolerance;
} chhs_energy_report;

CHHS_API const char* chhs_version(void);
CHHS_API const char* chhs_status_string(chhs_status status);
/* Message of the last failure on this thread ("" if none). */
CHHS_API const char* chhs_last_error(void);

/* scenario: convergence | spinodal | interface-breakup | custom */
CHHS_API chhs_status chhs_config_create(const char* scenario, chhs_config** out);
CHHS_API chhs_status chhs_config_load(const char* path, chhs_config** out);
CHHS_API chhs_status chhs_config_parse(const char* text, chhs_config** out);
CHHS_API chhs_status chhs_config_set(chhs_config* config, const char* key, const char* value);
CHHS_API chhs_status chhs_config_validate(const chhs_config* config);
/* Copies the resolved key = value echo into buf (NUL-terminated, truncated to
 * cap). *needed receives the full length including the terminator. */
CHHS_API chhs_status chhs_config_echo(const chhs_config* config, char* buf, size_t cap, size_t* needed);
CHHS_API void chhs_config_destroy(chhs_config* config);

/* Builds mesh, space and initial state. */
CHHS_API chhs_status chhs_simulation_create(const chhs_config* config, chhs_simulation** out);
/* Advances one time step; diag may be NULL. */
CHHS_API chhs_status chhs_simulation_step(chhs_simulation* sim, chhs_diagnostics* diag);
CHHS_API chhs_status chhs_simulation_diagnostics(const chhs_simulation* sim, chhs_diagnostics* diag);
CHHS_API chhs_status chhs_simulation_num_dofs(const chhs_simulation* sim, size_t* n);
CHHS_API chhs_status chhs_simulation_get_field(const chhs_simulation* sim, chhs_field field, double* out, size_t n);
/* xy receives 2n values (x0, y0, x1, y1, ...). */
CHHS_API chhs_status chhs_simulation_dof_coordinates(const chhs_simulation* sim, double* xy, size_t n);
CHHS_API chhs_status chhs_simulation_level_set(const chhs_simulation* sim, int* open_curves, int* closed_loops);
CHHS_API chhs_status chhs_simulation_write_vtk(const chhs_simulation* sim, const char* path);
CHHS_API void chhs_simulation_destroy(chhs_simulation* sim);

/* Full run with file output in the configured directory. Progress goes to
 * stderr when verbose != 0. steps_done may be NULL. */
CHHS_API chhs_status chhs_run(const chhs_config* config, int verbose, int* steps_done);

/* Convergence study over the configured levels. */
CHHS_API chhs_status chhs_converge(const chhs_config* config, int verbose, chhs_convergence** out);
CHHS_API size_t chhs_convergence_num_pairs(const chhs_convergence* table);
CHHS_API chhs_status chhs_convergence_get_pair(const chhs_convergence* table, size_t i, chhs_cauchy_measure measure,
                                               chhs_convergence_pair* out);
/* Rate between pair i and pair i + 1. Any output pointer may be NULL. */
CHHS_API chhs_status chhs_convergence_get_rate(const chhs_convergence* table, size_t i, chhs_cauchy_measure measure,
                                               double* phi_h1, double* phi_l2, double* p_h1, double* p_l2);
CHHS_API chhs_status chhs_convergence_format(const chhs_convergence* table, char* buf, size_t cap, size_t* needed);
CHHS_API void chhs_convergence_destroy(chhs_convergence* table);

/* Short run checking the modified energy law at every step. Returns
 * CHHS_ERR_ENERGY_LAW (with the report filled) when any step violates it. */
CHHS_API chhs_status chhs_check_energy(const chhs_config* config, int verbose, chhs_energy_report* report);

#ifdef __cplusplus
}
#endif

#endif /* CHHS_CHHS_H */
