#ifndef HDGFLOW_RUN_CONFIG_HPP
#define HDGFLOW_RUN_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

namespace hdgflow {

// One simulation, fully described. Parsed from a flat `key = value` file
// and/or command-line overrides; unset numeric fields take problem-specific
// defaults in resolve().
struct RunConfig {
  std::string problem;                 // rotating_gaussian | radial_expansion_wave
  int mesh_nx = 0, mesh_ny = 0;        // structured mesh; 0 -> problem default
  std::string mesh_file;               // overrides the structured mesh if set
  int degree = -1;                     // polynomial degree p (1..4)
  std::string integrator = "hairer_wanner"; // + al_rabeh | cash | bdf2 | bdf3
  std::string mode;                    // adaptive | fixed_dt; defaulted in resolve()
  double tol = -1;                     // adaptive tolerance
  double dt = -1;                      // fixed-mode step size
  double dt_initial = -1;
  double dt_min = -1;
  double dt_max = -1;
  double final_time = -1;
  double gamma = -1;                   // Euler only
  double nu = -1;                      // scalar model only
  double newton_tol = 1e-10;
  int newton_max_iter = 30;
  double gmres_tol = 1e-4;
  int gmres_restart = 30;
  int gmres_max_iter = 500;
  std::string linear_solver = "gmres_ilu0"; // | direct
  std::string output_dir = "out";
  bool write_snapshots = false;

  // Fill remaining defaults from the problem, then check every invariant.
  // Throws std::invalid_argument naming the offending field.
  void resolve();

  bool is_bdf() const { return integrator == "bdf2" || integrator == "bdf3"; }
  int bdf_order() const { return integrator == "bdf2" ? 2 : 3; }

  std::map<std::string, std::string> as_key_values() const;
};

// `key = value` lines; '#' starts a comment. Unknown keys are an error.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// apply one `key=value` override (same keys as the file format)
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

} // namespace hdgflow

#endif
