#include "hdgflow/time_loop.hpp"
#include "hdgflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hdgflow {

double StageProblem::residual_norm(const StateTriple& s) {
  try {
    return ctx_.assembler->stage_residual(s, shift_).lambda_norm();
  } catch (const inadmissible_state_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

bool StageProblem::compute_update(const StateTriple& s, StateTriple& dx, SolveStats&) {
  try {
    CondensedSystem sys = ctx_.assembler->assemble_condensed(s, shift_);
    Eigen::VectorXd dlambda = Eigen::VectorXd::Zero(sys.rhs.size());
    if (ctx_.solver == LinearSolverKind::direct) {
      dlambda = dense_lu_solve(sys.k_lambda.to_dense(), sys.rhs);
    } else {
      BlockIlu0 precond;
      precond.factorize(sys.k_lambda);
      gmres_solve(sys.k_lambda, sys.rhs, dlambda, ctx_.linear, &precond, ctx_.diagnostics);
    }
    dx.m = s.m;
    dx.np = s.np;
    dx.ne = s.ne;
    dx.lambda = dlambda;
    ctx_.assembler->back_substitute(sys, dlambda, dx.sigma, dx.w);
    return true;
  } catch (const inadmissible_state_error& err) {
    failure_ = err.what();
    return false;
  } catch (const solver_error& err) {
    failure_ = err.what();
    return false;
  }
}

Eigen::VectorXd dirk_stage_reference(const Eigen::VectorXd& w_n,
                                     const std::vector<Eigen::VectorXd>& k,
                                     const ButcherTableau& t, int stage, double dt) {
  Eigen::VectorXd ref = w_n;
  for (int j = 0; j < stage; ++j) ref += (dt * t.a(stage, j)) * k[j];
  return ref;
}

Eigen::VectorXd dirk_combine(const Eigen::VectorXd& w_n, const std::vector<Eigen::VectorXd>& k,
                             const Eigen::VectorXd& gamma, double dt) {
  Eigen::VectorXd out = w_n;
  for (int i = 0; i < gamma.size(); ++i)
    if (gamma(i) != 0) out += (dt * gamma(i)) * k[i];
  return out;
}

DirkStepResult dirk_step(StageSolveContext& ctx, const StateTriple& state_n, double t_n,
                         double dt, const ButcherTableau& tableau) {
  DirkStepResult res;
  if (!(dt > 0)) throw std::invalid_argument("dirk_step: dt must be positive");

  std::vector<Eigen::VectorXd> k(tableau.stages);
  StateTriple stage_state = state_n; // initial guess: last accepted state
  for (int i = 0; i < tableau.stages; ++i) {
    const Eigen::VectorXd ref = dirk_stage_reference(state_n.w, k, tableau, i, dt);
    StageShift shift;
    shift.a_dt = dt * tableau.a(i, i);
    shift.w_ref = &ref;
    shift.time = t_n + tableau.beta(i) * dt;

    StageProblem problem(ctx, shift);
    const SolveStats stats = newton_solve(problem, stage_state, ctx.newton);
    res.stage_newton_iters.push_back(stats.newton_iterations);
    res.total_newton += stats.newton_iterations;
    res.max_stage_newton = std::max(res.max_stage_newton, stats.newton_iterations);
    if (ctx.diagnostics) ctx.diagnostics->newton_iterations += stats.newton_iterations;
    if (!stats.converged) {
      if (ctx.diagnostics) ctx.diagnostics->newton_failures += 1;
      res.failure_reason = "stage " + std::to_string(i + 1) + " Newton did not converge" +
                           (problem.failure_reason().empty() ? "" : ": " + problem.failure_reason());
      return res;
    }
    k[i] = (stage_state.w - ref) / (dt * tableau.a(i, i));
  }

  res.w1 = dirk_combine(state_n.w, k, tableau.gamma1, dt);
  res.w2 = dirk_combine(state_n.w, k, tableau.gamma2, dt);
  res.last_stage = std::move(stage_state);
  res.success = true;
  return res;
}

double error_estimate(const Discretization& disc, const Eigen::VectorXd& w1,
                      const Eigen::VectorXd& w2) {
  return l2_norm_w(disc, w1 - w2);
}

ControllerDecision controller_decide(double e, double dt, double tol, int q, int n_it,
                                     int n_it_max, double dt_min, double dt_max) {
  if (!(tol > 0) || q < 2) throw std::invalid_argument("controller_decide: need tol > 0, q >= 2");
  ControllerDecision d;
  d.ratio = e / (tol * dt);
  d.accept = e <= dt * tol;
  if (!d.accept) {
    d.dt_next = std::max(0.5 * dt, dt_min);
    return d;
  }
  d.alpha = 0.9 * (2.0 * n_it_max + 1.0) / (2.0 * n_it_max + n_it);
  const double grow = std::pow(d.ratio, -1.0 / (q - 1.0)); // +inf when e == 0
  d.dt_next = std::clamp(d.alpha * dt * grow, dt_min, dt_max);
  return d;
}

namespace {

void push_record(TimeLoopResult& out, const StepRecord& rec) { out.history.push_back(rec); }

double run_diagnostic(const StepDiagnostic& diagnostic, const StateTriple& s, double t) {
  return diagnostic ? diagnostic(s, t) : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

TimeLoopResult integrate_adaptive(StageSolveContext& ctx, StateTriple initial, double t0,
                                  double T, const ButcherTableau& tableau,
                                  const ControllerConfig& cfg, const StepDiagnostic& diagnostic) {
  if (!(T > t0)) throw std::invalid_argument("integrate_adaptive: need T > t0");
  const double horizon = T - t0;
  const double dt_max = (cfg.dt_max > 0) ? cfg.dt_max : horizon;
  const double dt_min = cfg.dt_min;

  TimeLoopResult out;
  out.state = std::move(initial);
  double t = t0;
  double dt = (cfg.dt_initial > 0) ? cfg.dt_initial : 1e-3 * horizon;
  dt = std::clamp(dt, dt_min, dt_max);
  long cum_newton = 0;

  while (t < T) {
    const bool truncated = (t + dt >= T - 1e-12 * horizon);
    if (truncated) dt = T - t;

    DirkStepResult step = dirk_step(ctx, out.state, t, dt, tableau);
    cum_newton += step.total_newton;
    out.total_newton = cum_newton;

    StepRecord rec;
    rec.t = t;
    rec.dt = dt;
    rec.stage_newton_iters = step.stage_newton_iters;
    rec.newton_total = step.total_newton;
    rec.cumulative_newton = cum_newton;

    if (!step.success) {
      rec.newton_failed = true;
      rec.error_estimate = std::numeric_limits<double>::infinity();
      rec.ratio = std::numeric_limits<double>::infinity();
      push_record(out, rec);
      out.steps_rejected += 1;
      if (dt <= dt_min * (1 + 1e-12)) {
        out.failure_reason = "time step underflow after stage failure at t = " +
                             std::to_string(t) + ": " + step.failure_reason;
        out.final_time = t;
        return out;
      }
      dt = std::max(0.5 * dt, dt_min);
      continue;
    }

    const double e = error_estimate(ctx.assembler->disc(), step.w1, step.w2);
    const ControllerDecision dec = controller_decide(e, dt, cfg.tol, tableau.order,
                                                     step.max_stage_newton, ctx.newton.max_iter,
                                                     dt_min, dt_max);
    rec.error_estimate = e;
    rec.ratio = dec.ratio;
    rec.accepted = dec.accept;

    if (dec.accept) {
      out.state.w = step.w1;
      out.state.sigma = std::move(step.last_stage.sigma);
      out.state.lambda = std::move(step.last_stage.lambda);
      t = truncated ? T : t + dt;
      out.sum_error += e;
      out.steps_accepted += 1;
      rec.diagnostic = run_diagnostic(diagnostic, out.state, t);
    } else {
      out.steps_rejected += 1;
      if (dt <= dt_min * (1 + 1e-12)) {
        push_record(out, rec);
        out.failure_reason = "time step underflow on rejection at t = " + std::to_string(t);
        out.final_time = t;
        return out;
      }
    }
    push_record(out, rec);
    dt = dec.dt_next;
  }

  out.completed = true;
  out.final_time = T;
  return out;
}

TimeLoopResult integrate_dirk_fixed(StageSolveContext& ctx, StateTriple initial, double t0,
                                    double T, double dt, const ButcherTableau& tableau,
                                    const StepDiagnostic& diagnostic) {
  if (!(T > t0) || !(dt > 0)) throw std::invalid_argument("integrate_dirk_fixed: bad interval");
  TimeLoopResult out;
  out.state = std::move(initial);
  double t = t0;
  long cum_newton = 0;
  while (t < T) {
    const bool truncated = (t + dt >= T * (1 - 1e-14));
    const double step_dt = truncated ? T - t : dt;
    DirkStepResult step = dirk_step(ctx, out.state, t, step_dt, tableau);
    cum_newton += step.total_newton;
    out.total_newton = cum_newton;
    StepRecord rec;
    rec.t = t;
    rec.dt = step_dt;
    rec.stage_newton_iters = step.stage_newton_iters;
    rec.newton_total = step.total_newton;
    rec.cumulative_newton = cum_newton;
    if (!step.success) {
      rec.newton_failed = true;
      push_record(out, rec);
      out.failure_reason = step.failure_reason;
      out.final_time = t;
      return out;
    }
    rec.accepted = true;
    rec.error_estimate = error_estimate(ctx.assembler->disc(), step.w1, step.w2);
    out.state.w = step.w1;
    out.state.sigma = std::move(step.last_stage.sigma);
    out.state.lambda = std::move(step.last_stage.lambda);
    t = truncated ? T : t + step_dt;
    out.steps_accepted += 1;
    out.sum_error += rec.error_estimate;
    rec.diagnostic = run_diagnostic(diagnostic, out.state, t);
    push_record(out, rec);
  }
  out.completed = true;
  out.final_time = T;
  return out;
}

TimeLoopResult integrate_bdf(StageSolveContext& ctx, StateTriple initial, double t0, double T,
                             int order, double dt, const StepDiagnostic& diagnostic) {
  if (order != 2 && order != 3) throw std::invalid_argument("integrate_bdf: order must be 2 or 3");
  if (!(T > t0) || !(dt > 0)) throw std::invalid_argument("integrate_bdf: bad interval");
  const double steps_real = (T - t0) / dt;
  const long steps = std::lround(steps_real);
  if (steps < order || std::abs(steps_real - steps) > 1e-9 * steps)
    throw std::invalid_argument("integrate_bdf: dt must divide T - t0");

  const ButcherTableau startup = tableau(TableauName::hairer_wanner);
  TimeLoopResult out;
  out.state = std::move(initial);
  std::vector<Eigen::VectorXd> w_hist{out.state.w}; // newest last
  long cum_newton = 0;

  for (long n = 0; n < steps; ++n) {
    const double t = t0 + n * dt;
    const double t_next = (n + 1 == steps) ? T : t0 + (n + 1) * dt;
    StepRecord rec;
    rec.t = t;
    rec.dt = dt;

    if (n < order - 1) {
      DirkStepResult step = dirk_step(ctx, out.state, t, dt, startup);
      cum_newton += step.total_newton;
      rec.stage_newton_iters = step.stage_newton_iters;
      rec.newton_total = step.total_newton;
      rec.cumulative_newton = cum_newton;
      if (!step.success) {
        rec.newton_failed = true;
        push_record(out, rec);
        out.failure_reason = "startup: " + step.failure_reason;
        out.final_time = t;
        out.total_newton = cum_newton;
        return out;
      }
      out.state.w = step.w1;
      out.state.sigma = std::move(step.last_stage.sigma);
      out.state.lambda = std::move(step.last_stage.lambda);
    } else {
      Eigen::VectorXd ref;
      StageShift shift;
      if (order == 2) {
        ref = (4.0 * w_hist[w_hist.size() - 1] - w_hist[w_hist.size() - 2]) / 3.0;
        shift.a_dt = 2.0 * dt / 3.0;
      } else {
        ref = (18.0 * w_hist[w_hist.size() - 1] - 9.0 * w_hist[w_hist.size() - 2] +
               2.0 * w_hist[w_hist.size() - 3]) / 11.0;
        shift.a_dt = 6.0 * dt / 11.0;
      }
      shift.w_ref = &ref;
      shift.time = t_next;
      StageProblem problem(ctx, shift);
      const SolveStats stats = newton_solve(problem, out.state, ctx.newton);
      cum_newton += stats.newton_iterations;
      rec.stage_newton_iters = {stats.newton_iterations};
      rec.newton_total = stats.newton_iterations;
      rec.cumulative_newton = cum_newton;
      if (ctx.diagnostics) ctx.diagnostics->newton_iterations += stats.newton_iterations;
      if (!stats.converged) {
        if (ctx.diagnostics) ctx.diagnostics->newton_failures += 1;
        rec.newton_failed = true;
        push_record(out, rec);
        out.failure_reason = "BDF Newton did not converge at t = " + std::to_string(t_next) +
                             (problem.failure_reason().empty() ? "" : ": " + problem.failure_reason());
        out.final_time = t;
        out.total_newton = cum_newton;
        return out;
      }
    }
    rec.accepted = true;
    out.steps_accepted += 1;
    rec.diagnostic = run_diagnostic(diagnostic, out.state, t_next);
    push_record(out, rec);
    w_hist.push_back(out.state.w);
    if (w_hist.size() > static_cast<size_t>(order)) w_hist.erase(w_hist.begin());
  }

  out.completed = true;
  out.final_time = T;
  out.total_newton = cum_newton;
  return out;
}

} // namespace hdgflow
