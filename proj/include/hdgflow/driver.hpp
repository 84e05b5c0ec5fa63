#ifndef HDGFLOW_DRIVER_HPP
#define HDGFLOW_DRIVER_HPP

#include "hdgflow/run_config.hpp"
#include "hdgflow/time_loop.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hdgflow {

// Result numbers of one simulation; everything else lands on disk
// (history.csv, summary.json, optional VTK snapshots).
struct RunSummary {
  bool completed = false;
  std::string failure_reason;
  double final_time = 0;
  int steps_accepted = 0;
  int steps_rejected = 0;
  long total_newton = 0;
  double sum_error = 0;      // accepted local error estimates
  double error_budget = 0;   // (T - t0) * tol, adaptive mode only
  double final_error = std::numeric_limits<double>::quiet_NaN();         // L2 vs exact
  double final_entropy_error = std::numeric_limits<double>::quiet_NaN(); // Euler runs
  double wall_seconds = 0;
  long gmres_solves = 0;
  double gmres_worst_rel_residual = 0;
  long newton_failures = 0;
  int n_elements = 0, n_edges = 0;
  long trace_dofs = 0;
};

// Full in-memory artifacts of a run, for in-process consumers (studies,
// comparisons, tests). The history mirrors history.csv row for row.
struct RunArtifacts {
  RunSummary summary;
  std::vector<StepRecord> history;
};

// Executes one configured simulation and writes its artifacts under
// cfg.output_dir (created if needed; prefixed by $HDGFLOW_OUTPUT_ROOT when
// the directory is relative and the variable is set).
RunArtifacts run_simulation(const RunConfig& cfg);

struct StudyLevel {
  int level = 0;
  int n_elements = 0;
  double h = 0;
  double tol_or_dt = 0;
  double error = 0;
  double observed_order = std::numeric_limits<double>::quiet_NaN();
};

struct StudySpec {
  int levels = 3;
  // adaptive runs scale the tolerance as tol_l = tol0 * (h_l/h0)^min(q, p+1);
  // fixed-step runs halve dt with h
};

// Uniform refinement study from the base configuration (requires a problem
// with an exact solution). Each level runs in <output_dir>/level_<l>; the
// table is written to <output_dir>/study.csv.
std::vector<StudyLevel> convergence_study(const RunConfig& base, const StudySpec& spec);

struct CompareEntry {
  std::string integrator;
  RunSummary summary;
};

// Runs the same problem once per integrator (each in its own subdirectory)
// and writes a merged table to <output_dir>/compare.csv. BDF entries use the
// base config's dt; adaptive entries its tol.
std::vector<CompareEntry> compare_integrators(const RunConfig& base,
                                              const std::vector<std::string>& integrators);

// Legacy-VTK snapshot with per-vertex sampled fields (vertex values average
// the discontinuous element traces). For Euler states (gamma > 0) pressure,
// Mach number, and entropy are added.
void write_snapshot(const Discretization& disc, const Eigen::VectorXd& w_coeffs, double gamma,
                    const std::string& path);

// L2 norm over the domain of the elementwise-average entropy deviation from s0.
double entropy_error_norm(const Discretization& disc, const Eigen::VectorXd& w_coeffs,
                          double gamma, double s0);

void write_history_csv(const std::vector<StepRecord>& history, const std::string& path);

} // namespace hdgflow

#endif
