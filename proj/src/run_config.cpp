#include "hdgflow/run_config.hpp"
#include "hdgflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hdgflow {

namespace {

const double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (...) {
    throw std::invalid_argument("config field '" + key + "': not a number: " + v);
  }
  if (pos != v.size()) throw std::invalid_argument("config field '" + key + "': trailing characters in " + v);
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw std::invalid_argument("config field '" + key + "': not an integer: " + v);
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config field '" + key + "': expected true/false: " + v);
}

} // namespace

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "problem") cfg.problem = v;
  else if (key == "mesh_nx") cfg.mesh_nx = to_int(key, v);
  else if (key == "mesh_ny") cfg.mesh_ny = to_int(key, v);
  else if (key == "mesh_file") cfg.mesh_file = v;
  else if (key == "degree") cfg.degree = to_int(key, v);
  else if (key == "integrator") cfg.integrator = v;
  else if (key == "mode") cfg.mode = v;
  else if (key == "tol") cfg.tol = to_double(key, v);
  else if (key == "dt") cfg.dt = to_double(key, v);
  else if (key == "dt_initial") cfg.dt_initial = to_double(key, v);
  else if (key == "dt_min") cfg.dt_min = to_double(key, v);
  else if (key == "dt_max") cfg.dt_max = to_double(key, v);
  else if (key == "final_time") cfg.final_time = to_double(key, v);
  else if (key == "gamma") cfg.gamma = to_double(key, v);
  else if (key == "nu") cfg.nu = to_double(key, v);
  else if (key == "newton_tol") cfg.newton_tol = to_double(key, v);
  else if (key == "newton_max_iter") cfg.newton_max_iter = to_int(key, v);
  else if (key == "gmres_tol") cfg.gmres_tol = to_double(key, v);
  else if (key == "gmres_restart") cfg.gmres_restart = to_int(key, v);
  else if (key == "gmres_max_iter") cfg.gmres_max_iter = to_int(key, v);
  else if (key == "linear_solver") cfg.linear_solver = v;
  else if (key == "output_dir") cfg.output_dir = v;
  else if (key == "write_snapshots") cfg.write_snapshots = to_bool(key, v);
  else throw std::invalid_argument("unknown config field '" + key + "'");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected `key = value`");
    try {
      apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& err) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void RunConfig::resolve() {
  if (problem != "rotating_gaussian" && problem != "radial_expansion_wave")
    throw std::invalid_argument("config field 'problem': must be rotating_gaussian or "
                                "radial_expansion_wave, got '" + problem + "'");
  const bool euler = (problem == "radial_expansion_wave");

  if (mesh_nx == 0) mesh_nx = euler ? 32 : 16;
  if (mesh_ny == 0) mesh_ny = mesh_nx;
  if (mesh_file.empty() && (mesh_nx < 1 || mesh_ny < 1))
    throw std::invalid_argument("config field 'mesh_nx'/'mesh_ny': must be >= 1");

  if (degree < 0) degree = euler ? 2 : 3;
  if (degree < 1 || degree > 4)
    throw std::invalid_argument("config field 'degree': p must be in {1,2,3,4}, got " +
                                std::to_string(degree));

  static const char* known[] = {"hairer_wanner", "al_rabeh", "cash", "bdf2", "bdf3"};
  if (std::find_if(std::begin(known), std::end(known),
                   [&](const char* k) { return integrator == k; }) == std::end(known))
    throw std::invalid_argument("config field 'integrator': unknown integrator '" + integrator + "'");

  if (mode.empty()) mode = is_bdf() ? "fixed_dt" : "adaptive";
  if (mode != "adaptive" && mode != "fixed_dt")
    throw std::invalid_argument("config field 'mode': must be adaptive or fixed_dt");
  if (is_bdf() && mode != "fixed_dt")
    throw std::invalid_argument("config field 'mode': BDF integrators are fixed-step only");

  if (final_time < 0) final_time = euler ? 2.0 : kPi / 4.0;
  if (!(final_time > 0)) throw std::invalid_argument("config field 'final_time': must be > 0");

  if (mode == "adaptive") {
    if (tol < 0) tol = 1e-2;
    if (!(tol > 0)) throw std::invalid_argument("config field 'tol': must be > 0");
    if (dt >= 0)
      throw std::invalid_argument("config field 'dt': set only in fixed_dt mode (use tol)");
  } else {
    if (!(dt > 0)) throw std::invalid_argument("config field 'dt': fixed_dt mode needs dt > 0");
    if (tol >= 0)
      throw std::invalid_argument("config field 'tol': set only in adaptive mode (use dt)");
  }

  if (dt_min < 0) dt_min = 1e-12;
  if (dt_max < 0) dt_max = 0; // 0 -> whole interval
  if (dt_initial < 0) dt_initial = 0;

  if (gamma < 0) gamma = euler ? 3.0 : 1.4;
  if (euler && !(gamma > 1)) throw std::invalid_argument("config field 'gamma': must be > 1");
  if (nu < 0) nu = 1e-3;

  if (!(newton_tol > 0)) throw std::invalid_argument("config field 'newton_tol': must be > 0");
  if (newton_max_iter < 1)
    throw std::invalid_argument("config field 'newton_max_iter': must be >= 1");
  if (!(gmres_tol > 0) || gmres_tol >= 1)
    throw std::invalid_argument("config field 'gmres_tol': must be in (0,1)");
  if (linear_solver != "gmres_ilu0" && linear_solver != "direct")
    throw std::invalid_argument("config field 'linear_solver': must be gmres_ilu0 or direct");
}

std::map<std::string, std::string> RunConfig::as_key_values() const {
  auto num = [](double x) {
    std::ostringstream ss;
    ss.precision(17);
    ss << x;
    return ss.str();
  };
  std::map<std::string, std::string> kv;
  kv["problem"] = problem;
  kv["mesh_nx"] = std::to_string(mesh_nx);
  kv["mesh_ny"] = std::to_string(mesh_ny);
  if (!mesh_file.empty()) kv["mesh_file"] = mesh_file;
  kv["degree"] = std::to_string(degree);
  kv["integrator"] = integrator;
  kv["mode"] = mode;
  if (mode == "adaptive") kv["tol"] = num(tol);
  else kv["dt"] = num(dt);
  kv["dt_initial"] = num(dt_initial);
  kv["dt_min"] = num(dt_min);
  kv["dt_max"] = num(dt_max);
  kv["final_time"] = num(final_time);
  kv["gamma"] = num(gamma);
  kv["nu"] = num(nu);
  kv["newton_tol"] = num(newton_tol);
  kv["newton_max_iter"] = std::to_string(newton_max_iter);
  kv["gmres_tol"] = num(gmres_tol);
  kv["gmres_restart"] = std::to_string(gmres_restart);
  kv["gmres_max_iter"] = std::to_string(gmres_max_iter);
  kv["linear_solver"] = linear_solver;
  kv["output_dir"] = output_dir;
  kv["write_snapshots"] = write_snapshots ? "true" : "false";
  return kv;
}

} // namespace hdgflow
