// Command-line front end; talks to the solver exclusively through the C API
// of the shared library.

#include <hdgflow.h>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct ConfigHandle {
  hfw_config* ptr = hfw_config_create();
  ~ConfigHandle() { hfw_config_free(ptr); }
};

int report(hfw_status status, const char* what) {
  if (status == HFW_OK) return 0;
  std::fprintf(stderr, "hdgflow %s failed (%s): %s\n", what, hfw_status_name(status),
               hfw_last_error());
  return 1;
}

int apply_options(hfw_config* cfg, const std::string& config_file,
                  const std::vector<std::string>& sets) {
  if (!config_file.empty()) {
    const hfw_status st = hfw_config_load_file(cfg, config_file.c_str());
    if (st != HFW_OK) return report(st, "config load");
  }
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "hdgflow: --set expects key=value, got '%s'\n", kv.c_str());
      return 1;
    }
    const hfw_status st =
        hfw_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != HFW_OK) return report(st, "config set");
  }
  return 0;
}

void print_summary(const hfw_run_summary& s) {
  std::printf("completed:            %s\n", s.completed ? "yes" : "NO");
  std::printf("final time:           %.17g\n", s.final_time);
  std::printf("steps accepted:       %d\n", s.steps_accepted);
  std::printf("steps rejected:       %d\n", s.steps_rejected);
  std::printf("total Newton iters:   %ld\n", s.total_newton);
  if (s.error_budget > 0)
    std::printf("error budget:         sum e = %.6g < %.6g = T*tol -> %s\n", s.sum_error,
                s.error_budget, s.sum_error < s.error_budget ? "ok" : "VIOLATED");
  if (std::isfinite(s.final_error)) std::printf("final L2 error:       %.6g\n", s.final_error);
  if (std::isfinite(s.final_entropy_error))
    std::printf("final entropy error:  %.6g\n", s.final_entropy_error);
  std::printf("mesh:                 %d elements, %d edges, %ld trace dofs\n", s.n_elements,
              s.n_edges, s.trace_dofs);
  std::printf("GMRES solves:         %ld (worst rel residual %.3g)\n", s.gmres_solves,
              s.gmres_worst_rel_residual);
  std::printf("wall time:            %.2f s\n", s.wall_seconds);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"hdgflow: adaptive embedded-DIRK / HDG solver for 2D unsteady flows"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> sets;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_file, "configuration file (key = value lines)");
    cmd->add_option("-s,--set", sets, "override a config field, e.g. --set degree=3")
        ->take_all();
  };

  auto* run = app.add_subcommand("run", "run one simulation");
  add_common(run);

  auto* study = app.add_subcommand("study", "uniform refinement convergence study");
  add_common(study);
  int levels = 3;
  study->add_option("-l,--levels", levels, "number of refinement levels (>= 2)");

  auto* compare = app.add_subcommand("compare", "run several integrators on one problem");
  add_common(compare);
  std::string integrators = "hairer_wanner,al_rabeh,cash";
  compare->add_option("-i,--integrators", integrators, "comma-separated integrator list");

  auto* meshgen = app.add_subcommand("mesh-gen", "write a structured mesh file");
  int nx = 16, ny = 16;
  double xmin = -0.5, ymin = -0.5, xmax = 0.5, ymax = 0.5;
  std::string mesh_path = "mesh.txt";
  meshgen->add_option("--nx", nx, "cells in x");
  meshgen->add_option("--ny", ny, "cells in y");
  meshgen->add_option("--xmin", xmin);
  meshgen->add_option("--ymin", ymin);
  meshgen->add_option("--xmax", xmax);
  meshgen->add_option("--ymax", ymax);
  meshgen->add_option("-o,--output", mesh_path, "output mesh file");

  CLI11_PARSE(app, argc, argv);

  if (meshgen->parsed())
    return report(hfw_mesh_gen(nx, ny, xmin, ymin, xmax, ymax, mesh_path.c_str()), "mesh-gen");

  ConfigHandle cfg;
  if (!cfg.ptr) {
    std::fprintf(stderr, "hdgflow: out of memory\n");
    return 1;
  }
  if (const int rc = apply_options(cfg.ptr, config_file, sets)) return rc;

  if (run->parsed()) {
    hfw_run_summary summary{};
    const hfw_status st = hfw_run(cfg.ptr, &summary);
    if (st == HFW_OK || st == HFW_ERR_RUN_INCOMPLETE) print_summary(summary);
    return report(st, "run");
  }
  if (study->parsed()) return report(hfw_study(cfg.ptr, levels), "study");
  if (compare->parsed()) return report(hfw_compare(cfg.ptr, integrators.c_str()), "compare");
  return 1;
}
