#include "hdgflow/driver.hpp"
#include "hdgflow/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace hdgflow {

namespace {

namespace fs = std::filesystem;

fs::path resolve_output_dir(const std::string& dir) {
  fs::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("HDGFLOW_OUTPUT_ROOT")) p = fs::path(root) / p;
  }
  fs::create_directories(p);
  return fs::absolute(p);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::unique_ptr<FluxModel> build_model(const RunConfig& cfg) {
  if (cfg.problem == "rotating_gaussian") return make_rotating_gaussian_model(cfg.nu);
  return make_radial_expansion_model(cfg.gamma);
}

Mesh build_mesh(const RunConfig& cfg) {
  if (!cfg.mesh_file.empty()) return read_mesh_file(cfg.mesh_file);
  BBox box;
  if (cfg.problem == "rotating_gaussian") box = {-0.5, -0.5, 0.5, 0.5};
  else box = {-4.0, -4.0, 4.0, 4.0};
  return generate_structured(cfg.mesh_nx, cfg.mesh_ny, box);
}

StateTriple initial_state(const Discretization& disc, const FluxModel& model) {
  StateTriple s = StateTriple::zero(disc);
  auto f = [&](double x, double y, Eigen::Ref<Eigen::VectorXd> out) {
    model.initial(Eigen::Vector2d(x, y), out);
  };
  s.w = project_elements(disc, f);
  s.lambda = project_edges(disc, f);
  s.sigma = lift_sigma(disc, s.w, s.lambda);
  return s;
}

} // namespace

double entropy_error_norm(const Discretization& disc, const Eigen::VectorXd& w_coeffs,
                          double gamma, double s0) {
  const int m = disc.components(), np = disc.np(), nq = disc.nq();
  Eigen::VectorXd wq(m);
  double acc = 0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    auto block = w_coeffs.segment(static_cast<Eigen::Index>(k) * m * np, m * np);
    double mean = 0;
    for (int q = 0; q < nq; ++q) {
      for (int c = 0; c < m; ++c) wq(c) = block.segment(c * np, np).dot(disc.phi().col(q));
      mean += 2.0 * disc.volume_rule().weights[q] * euler_entropy(wq, gamma);
    }
    const double dev = mean - s0; // mean: quadrature of s over K divided by |K|
    acc += disc.geom(k).area * dev * dev;
  }
  return std::sqrt(acc);
}

void write_history_csv(const std::vector<StepRecord>& history, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path);
  out << "t,dt,e,r,accepted,newton_iters,cum_newton,error_or_entropy\n";
  for (const auto& rec : history) {
    out << fmt(rec.t) << ',' << fmt(rec.dt) << ',' << fmt(rec.error_estimate) << ','
        << fmt(rec.ratio) << ',' << (rec.accepted ? 1 : 0) << ',' << rec.newton_total << ','
        << rec.cumulative_newton << ',' << fmt(rec.diagnostic) << '\n';
  }
  if (!out) throw io_error("write failed for " + path);
}

void write_snapshot(const Discretization& disc, const Eigen::VectorXd& w_coeffs, double gamma,
                    const std::string& path) {
  const Mesh& mesh = disc.mesh();
  const int m = disc.components();
  const int nv = mesh.num_vertices();

  // vertex sampling: average over incident elements in index order
  Eigen::MatrixXd vertex_vals = Eigen::MatrixXd::Zero(m, nv);
  Eigen::VectorXi count = Eigen::VectorXi::Zero(nv);
  Eigen::VectorXd val(m);
  for (int k = 0; k < mesh.num_triangles(); ++k)
    for (int vi : mesh.triangles[k]) {
      eval_w(disc, w_coeffs, k, Eigen::Vector2d(mesh.vertices[vi][0], mesh.vertices[vi][1]), val);
      vertex_vals.col(vi) += val;
      count(vi) += 1;
    }
  for (int v = 0; v < nv; ++v) vertex_vals.col(v) /= count(v);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path);
  out << "# vtk DataFile Version 3.0\nhdgflow snapshot\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const auto& v : mesh.vertices) out << fmt(v[0]) << ' ' << fmt(v[1]) << " 0\n";
  out << "CELLS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.num_triangles() << '\n';
  for (int k = 0; k < mesh.num_triangles(); ++k) out << "5\n";

  const bool euler = (m == 4 && gamma > 0);
  std::vector<std::string> names;
  if (euler) names = {"rho", "rho_u", "rho_v", "E"};
  else
    for (int c = 0; c < m; ++c) names.push_back(m == 1 ? "w" : "w" + std::to_string(c));

  out << "POINT_DATA " << nv << '\n';
  for (int c = 0; c < m; ++c) {
    out << "SCALARS " << names[c] << " double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < nv; ++v) out << fmt(vertex_vals(c, v)) << '\n';
  }
  if (euler) {
    auto derived = [&](const char* name, auto f) {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      Eigen::VectorXd w(4);
      for (int v = 0; v < nv; ++v) {
        w = vertex_vals.col(v);
        out << fmt(f(w)) << '\n';
      }
    };
    derived("pressure", [&](const Eigen::VectorXd& w) { return euler_pressure(w, gamma); });
    derived("mach", [&](const Eigen::VectorXd& w) {
      const double speed = std::hypot(w(1), w(2)) / w(0);
      return speed / euler_sound_speed(w, gamma);
    });
    derived("entropy", [&](const Eigen::VectorXd& w) { return euler_entropy(w, gamma); });
  }
  if (!out) throw io_error("write failed for " + path);
}

RunArtifacts run_simulation(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  cfg.resolve();
  const fs::path outdir = resolve_output_dir(cfg.output_dir);
  const auto t_start = std::chrono::steady_clock::now();

  const Mesh mesh = build_mesh(cfg);
  const auto model = build_model(cfg);
  const Discretization disc(mesh, cfg.degree, model->components());
  HdgAssembler assembler(disc, *model);

  SolverDiagnostics diagnostics;
  StageSolveContext ctx;
  ctx.assembler = &assembler;
  ctx.newton = NewtonConfig{cfg.newton_tol, cfg.newton_max_iter, 1.0 / 256.0};
  ctx.linear = LinearConfig{cfg.gmres_tol, cfg.gmres_restart, cfg.gmres_max_iter};
  ctx.solver = (cfg.linear_solver == "direct") ? LinearSolverKind::direct
                                               : LinearSolverKind::gmres_ilu0;
  ctx.diagnostics = &diagnostics;

  StateTriple state = initial_state(disc, *model);

  const bool euler = (model->components() == 4);
  double s0 = 0;
  if (euler) {
    Eigen::VectorXd origin_state(4);
    model->initial(Eigen::Vector2d::Zero(), origin_state);
    s0 = euler_entropy(origin_state, cfg.gamma);
  }
  StepDiagnostic diagnostic;
  if (euler) {
    diagnostic = [&](const StateTriple& s, double) {
      return entropy_error_norm(disc, s.w, cfg.gamma, s0);
    };
  } else if (model->has_exact()) {
    diagnostic = [&](const StateTriple& s, double t) {
      return l2_error(disc, s.w,
                      [&](double x, double y, double tt, Eigen::Ref<Eigen::VectorXd> out) {
                        model->exact(Eigen::Vector2d(x, y), tt, out);
                      },
                      t);
    };
  }

  if (cfg.write_snapshots)
    write_snapshot(disc, state.w, euler ? cfg.gamma : -1, (outdir / "snapshot_t0.vtk").string());

  TimeLoopResult loop;
  if (cfg.is_bdf()) {
    loop = integrate_bdf(ctx, std::move(state), 0.0, cfg.final_time, cfg.bdf_order(), cfg.dt,
                         diagnostic);
  } else if (cfg.mode == "fixed_dt") {
    loop = integrate_dirk_fixed(ctx, std::move(state), 0.0, cfg.final_time, cfg.dt,
                                tableau(tableau_name_from_string(cfg.integrator)), diagnostic);
  } else {
    ControllerConfig cc;
    cc.tol = cfg.tol;
    cc.dt_initial = cfg.dt_initial;
    cc.dt_min = cfg.dt_min;
    cc.dt_max = cfg.dt_max;
    loop = integrate_adaptive(ctx, std::move(state), 0.0, cfg.final_time,
                              tableau(tableau_name_from_string(cfg.integrator)), cc, diagnostic);
  }

  RunArtifacts art;
  art.history = loop.history;
  RunSummary& sum = art.summary;
  sum.completed = loop.completed;
  sum.failure_reason = loop.failure_reason;
  sum.final_time = loop.final_time;
  sum.steps_accepted = loop.steps_accepted;
  sum.steps_rejected = loop.steps_rejected;
  sum.total_newton = loop.total_newton;
  sum.sum_error = loop.sum_error;
  sum.error_budget = (cfg.mode == "adaptive") ? cfg.final_time * cfg.tol : 0;
  sum.n_elements = disc.num_elements();
  sum.n_edges = disc.num_edges();
  sum.trace_dofs = static_cast<long>(disc.num_edges()) * disc.components() * disc.ne();
  sum.gmres_solves = diagnostics.gmres_solves;
  sum.gmres_worst_rel_residual = diagnostics.gmres_worst_rel_residual;
  sum.newton_failures = diagnostics.newton_failures;

  if (loop.completed) {
    if (euler) sum.final_entropy_error = entropy_error_norm(disc, loop.state.w, cfg.gamma, s0);
    else if (model->has_exact() && diagnostic)
      sum.final_error = diagnostic(loop.state, loop.final_time);
    if (cfg.write_snapshots)
      write_snapshot(disc, loop.state.w, euler ? cfg.gamma : -1,
                     (outdir / "snapshot_final.vtk").string());
  }
  sum.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  write_history_csv(art.history, (outdir / "history.csv").string());

  nlohmann::json j;
  j["config"] = cfg.as_key_values();
  j["completed"] = sum.completed;
  if (!sum.completed) j["failure_reason"] = sum.failure_reason;
  j["final_time"] = sum.final_time;
  j["n_elements"] = sum.n_elements;
  j["n_edges"] = sum.n_edges;
  j["trace_dofs"] = sum.trace_dofs;
  j["steps_accepted"] = sum.steps_accepted;
  j["steps_rejected"] = sum.steps_rejected;
  j["total_newton"] = sum.total_newton;
  j["sum_error"] = sum.sum_error;
  j["error_budget"] = sum.error_budget;
  if (cfg.mode == "adaptive") j["budget_satisfied"] = sum.sum_error < sum.error_budget;
  if (std::isfinite(sum.final_error)) j["final_error"] = sum.final_error;
  if (std::isfinite(sum.final_entropy_error)) j["final_entropy_error"] = sum.final_entropy_error;
  j["wall_seconds"] = sum.wall_seconds;
  j["gmres"] = {{"solves", diagnostics.gmres_solves},
                {"iterations", diagnostics.gmres_iterations},
                {"worst_rel_residual", diagnostics.gmres_worst_rel_residual}};
  j["newton_failures"] = diagnostics.newton_failures;
  std::ofstream js(outdir / "summary.json");
  js << j.dump(2) << '\n';

  return art;
}

std::vector<StudyLevel> convergence_study(const RunConfig& base_in, const StudySpec& spec) {
  RunConfig base = base_in;
  base.resolve();
  if (spec.levels < 2) throw std::invalid_argument("convergence_study: need at least 2 levels");
  if (base.problem != "rotating_gaussian")
    throw std::invalid_argument("convergence_study: problem has no exact solution");

  const fs::path outdir = resolve_output_dir(base.output_dir);
  const int q = base.is_bdf() ? base.bdf_order()
                              : tableau(tableau_name_from_string(base.integrator)).order;
  const double rate = std::min(q, base.degree + 1);

  std::vector<StudyLevel> table;
  for (int l = 0; l < spec.levels; ++l) {
    RunConfig cfg = base;
    cfg.mesh_nx = base.mesh_nx << l;
    cfg.mesh_ny = base.mesh_ny << l;
    const double scale = std::pow(0.5, l);
    if (cfg.mode == "adaptive") cfg.tol = base.tol * std::pow(scale, rate);
    else cfg.dt = base.dt * scale;
    cfg.output_dir = (outdir / ("level_" + std::to_string(l))).string();

    const RunArtifacts art = run_simulation(cfg);
    StudyLevel row;
    row.level = l;
    row.n_elements = art.summary.n_elements;
    row.h = 1.0 / cfg.mesh_nx;
    row.tol_or_dt = (cfg.mode == "adaptive") ? cfg.tol : cfg.dt;
    row.error = art.summary.final_error;
    if (!art.summary.completed)
      throw solver_error("convergence_study: level " + std::to_string(l) +
                         " failed: " + art.summary.failure_reason);
    if (l > 0) row.observed_order = std::log2(table.back().error / row.error);
    table.push_back(row);

    std::ofstream out(outdir / "study.csv", std::ios::binary);
    out << "level,n_elements,h,tol_or_dt,error,observed_order\n";
    for (const auto& r : table)
      out << r.level << ',' << r.n_elements << ',' << fmt(r.h) << ',' << fmt(r.tol_or_dt) << ','
          << fmt(r.error) << ',' << fmt(r.observed_order) << '\n';
  }
  return table;
}

std::vector<CompareEntry> compare_integrators(const RunConfig& base_in,
                                              const std::vector<std::string>& integrators) {
  if (integrators.size() < 2)
    throw std::invalid_argument("compare_integrators: need at least 2 integrators");
  const fs::path outdir = resolve_output_dir(base_in.output_dir);

  std::vector<CompareEntry> entries;
  for (const auto& name : integrators) {
    RunConfig cfg = base_in; // re-resolve per integrator (mode defaults differ)
    cfg.integrator = name;
    const bool bdf = (name == "bdf2" || name == "bdf3");
    cfg.mode = bdf ? "fixed_dt" : "adaptive";
    if (bdf) {
      cfg.tol = -1;
      if (!(cfg.dt > 0))
        throw std::invalid_argument("compare_integrators: BDF entries need 'dt' in the base config");
    } else {
      cfg.dt = -1; // adaptive entries fall back to the default tol when unset
    }
    cfg.output_dir = (outdir / name).string();
    const RunArtifacts art = run_simulation(cfg);
    entries.push_back({name, art.summary});
  }

  std::ofstream out(outdir / "compare.csv", std::ios::binary);
  out << "integrator,completed,final_diagnostic,steps_accepted,steps_rejected,total_newton,"
         "mean_accepted_dt\n";
  for (const auto& e : entries) {
    const double diag = std::isfinite(e.summary.final_entropy_error)
                            ? e.summary.final_entropy_error
                            : e.summary.final_error;
    const double mean_dt =
        e.summary.steps_accepted > 0 ? e.summary.final_time / e.summary.steps_accepted : 0;
    out << e.integrator << ',' << (e.summary.completed ? 1 : 0) << ',' << fmt(diag) << ','
        << e.summary.steps_accepted << ',' << e.summary.steps_rejected << ','
        << e.summary.total_newton << ',' << fmt(mean_dt) << '\n';
  }
  return entries;
}

} // namespace hdgflow
