#ifndef HDGFLOW_TIME_LOOP_HPP
#define HDGFLOW_TIME_LOOP_HPP

#include "hdgflow/hdg.hpp"
#include "hdgflow/newton.hpp"
#include "hdgflow/tableau.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hdgflow {

// How the condensed trace system is solved each Newton iteration.
enum class LinearSolverKind { gmres_ilu0, direct };

// Shared pieces of one implicit solve chain: assembler, solver settings, and
// the accumulated diagnostics for the whole run.
struct StageSolveContext {
  HdgAssembler* assembler = nullptr;
  NewtonConfig newton;
  LinearConfig linear;
  LinearSolverKind solver = LinearSolverKind::gmres_ilu0;
  SolverDiagnostics* diagnostics = nullptr;
};

// Newton problem for one shifted stage system; convergence and damping are
// judged on the 2-norm of the trace-equation residual.
class StageProblem {
public:
  StageProblem(StageSolveContext& ctx, const StageShift& shift) : ctx_(ctx), shift_(shift) {}

  double residual_norm(const StateTriple& s);
  bool compute_update(const StateTriple& s, StateTriple& dx, SolveStats& stats);
  void apply(StateTriple& x, double step, const StateTriple& dx) { x.axpy(step, dx); }

  const std::string& failure_reason() const { return failure_; }

private:
  StageSolveContext& ctx_;
  StageShift shift_;
  std::string failure_;
};

// stage algebra shared by the PDE stepper and the plain-ODE checks
Eigen::VectorXd dirk_stage_reference(const Eigen::VectorXd& w_n,
                                     const std::vector<Eigen::VectorXd>& k,
                                     const ButcherTableau& t, int stage, double dt);
Eigen::VectorXd dirk_combine(const Eigen::VectorXd& w_n, const std::vector<Eigen::VectorXd>& k,
                             const Eigen::VectorXd& gamma, double dt);

struct DirkStepResult {
  bool success = false;
  std::string failure_reason;
  Eigen::VectorXd w1, w2;  // element-field combinations of both weight rows
  StateTriple last_stage;  // carries sigma/lambda (and the last stage's w)
  std::vector<int> stage_newton_iters;
  int max_stage_newton = 0;
  int total_newton = 0;
};

// One embedded DIRK step from state_n at time t_n. Every stage is an implicit
// solve; stage derivatives are recovered algebraically, so the two weight-row
// combinations cost no further solves. A stage Newton failure aborts the step.
DirkStepResult dirk_step(StageSolveContext& ctx, const StateTriple& state_n, double t_n,
                         double dt, const ButcherTableau& tableau);

// || w1 - w2 ||_{L2(Omega)} over all components (exact via the orthonormal basis)
double error_estimate(const Discretization& disc, const Eigen::VectorXd& w1,
                      const Eigen::VectorXd& w2);

struct ControllerDecision {
  bool accept = false;
  double dt_next = 0;
  double ratio = 0;  // e / (tol * dt)
  double alpha = 0;  // Newton-aware safety factor
};

// Accept iff e <= dt * tol. On acceptance the new step follows the elementary
// controller dt * alpha * r^{-1/(q-1)} with alpha = 0.9 (2 n_max + 1)/(2 n_max + n_it);
// a rejected step is retried with half the step size. Both are clamped to
// [dt_min, dt_max].
ControllerDecision controller_decide(double e, double dt, double tol, int q, int n_it,
                                     int n_it_max, double dt_min, double dt_max);

struct StepRecord {
  double t = 0;       // time at the start of the attempt
  double dt = 0;
  double error_estimate = 0;
  double ratio = 0;
  bool accepted = false;
  bool newton_failed = false;
  std::vector<int> stage_newton_iters;
  int newton_total = 0;       // this attempt, all stages
  long cumulative_newton = 0; // over the run, including rejected attempts
  double diagnostic = std::numeric_limits<double>::quiet_NaN(); // on acceptance
};

struct ControllerConfig {
  double tol = 1e-2;
  double dt_initial = 0; // 0 -> 1e-3 * (T - t0)
  double dt_min = 1e-12;
  double dt_max = 0;     // 0 -> T - t0
};

struct TimeLoopResult {
  StateTriple state;
  std::vector<StepRecord> history;
  bool completed = false;
  std::string failure_reason;
  double final_time = 0;
  double sum_error = 0; // sum of accepted local error estimates
  long total_newton = 0;
  int steps_accepted = 0;
  int steps_rejected = 0;
};

using StepDiagnostic = std::function<double(const StateTriple&, double t)>;

// Adaptive embedded-DIRK integration of the semi-discrete system on [t0, T].
// The last step is truncated so the final time is hit exactly; accepted local
// error estimates obey sum_e < (T - t0) * tol by construction of the
// acceptance test. A hard failure preserves the history.
TimeLoopResult integrate_adaptive(StageSolveContext& ctx, StateTriple initial, double t0,
                                  double T, const ButcherTableau& tableau,
                                  const ControllerConfig& cfg,
                                  const StepDiagnostic& diagnostic = nullptr);

// Fixed-step embedded DIRK (no controller; every step is accepted).
TimeLoopResult integrate_dirk_fixed(StageSolveContext& ctx, StateTriple initial, double t0,
                                    double T, double dt, const ButcherTableau& tableau,
                                    const StepDiagnostic& diagnostic = nullptr);

// Fixed-step BDF integration of order 2 or 3; startup takes order-1 steps of
// the 5-stage DIRK at the same dt. dt must divide T - t0.
TimeLoopResult integrate_bdf(StageSolveContext& ctx, StateTriple initial, double t0, double T,
                             int order, double dt, const StepDiagnostic& diagnostic = nullptr);

} // namespace hdgflow

#endif
