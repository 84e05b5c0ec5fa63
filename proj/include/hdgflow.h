/* hdgflow: HDG solver for unsteady convection-diffusion and compressible
 * Euler flows with embedded diagonally implicit Runge-Kutta time stepping.
 *
 * C interface of the shared library. All entry points are non-throwing and
 * return a status code; hfw_last_error() describes the most recent failure
 * on the calling thread. Handles are opaque and freed by their *_free call.
 */
#ifndef HDGFLOW_H
#define HDGFLOW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hfw_status {
  HFW_OK = 0,
  HFW_ERR_INVALID_ARGUMENT = 1,
  HFW_ERR_IO = 2,
  HFW_ERR_SOLVER_FAILURE = 3,     /* solver contract violated (hard failure) */
  HFW_ERR_INADMISSIBLE_STATE = 4, /* rho <= 0 or p <= 0 during evaluation */
  HFW_ERR_RUN_INCOMPLETE = 5,     /* run aborted; artifacts were still written */
  HFW_ERR_INTERNAL = 6
} hfw_status;

const char* hfw_status_name(hfw_status status);

/* message describing the last failing call on this thread ("" if none) */
const char* hfw_last_error(void);

const char* hfw_version(void);

/* ---- simulation configuration -------------------------------------------- */

typedef struct hfw_config hfw_config;

hfw_config* hfw_config_create(void);
void hfw_config_free(hfw_config* cfg);

/* merge a `key = value` config file into cfg */
hfw_status hfw_config_load_file(hfw_config* cfg, const char* path);

/* set one field by key (same keys as the config file format) */
hfw_status hfw_config_set(hfw_config* cfg, const char* key, const char* value);

/* read back a field as text; returns HFW_ERR_INVALID_ARGUMENT for unknown
 * keys or when the buffer is too small (needed size via *needed, optional) */
hfw_status hfw_config_get(const hfw_config* cfg, const char* key, char* buffer, size_t size,
                          size_t* needed);

/* ---- runs ------------------------------------------------------------------ */

typedef struct hfw_run_summary {
  int completed;
  double final_time;
  int steps_accepted;
  int steps_rejected;
  long total_newton;
  double sum_error;          /* accepted local error estimates */
  double error_budget;       /* T * tol in adaptive mode, else 0 */
  double final_error;        /* L2 error vs exact solution; NaN if unavailable */
  double final_entropy_error;/* Euler runs; NaN otherwise */
  double wall_seconds;
  long gmres_solves;
  double gmres_worst_rel_residual;
  long newton_failures;
  int n_elements;
  int n_edges;
  long trace_dofs;
} hfw_run_summary;

/* Execute one simulation. Writes history.csv / summary.json (and optional
 * VTK snapshots) under the configured output directory; summary may be null. */
hfw_status hfw_run(const hfw_config* cfg, hfw_run_summary* summary);

/* Uniform refinement study (levels >= 2); writes level_<l>/ runs and
 * study.csv under the configured output directory. */
hfw_status hfw_study(const hfw_config* cfg, int levels);

/* Comma-separated integrator list, one run each plus compare.csv. */
hfw_status hfw_compare(const hfw_config* cfg, const char* integrators_csv);

/* ---- meshes ----------------------------------------------------------------- */

/* Write a structured triangulation (2*nx*ny triangles) in the plain-text mesh
 * format: header `nv nt`, nv vertex lines `x y`, nt triangle lines `i0 i1 i2`. */
hfw_status hfw_mesh_gen(int nx, int ny, double xmin, double ymin, double xmax, double ymax,
                        const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HDGFLOW_H */
