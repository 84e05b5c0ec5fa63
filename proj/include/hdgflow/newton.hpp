#ifndef HDGFLOW_NEWTON_HPP
#define HDGFLOW_NEWTON_HPP

#include "hdgflow/solvers.hpp"

#include <cmath>
#include <limits>

namespace hdgflow {

// Damped Newton iteration. The problem supplies the residual norm that drives
// both convergence and the line search (for stage systems: the 2-norm of the
// trace-equation residual), the linearized update, and the state update rule:
//
//   double residual_norm(const State& x);      // +inf marks an unevaluable state
//   bool   compute_update(const State& x, State& dx, SolveStats& stats);
//   void   apply(State& x, double step, const State& dx);
//
// Backtracking halves the step until the residual norm decreases, down to
// config.min_step; a line search that cannot decrease the norm fails the solve.
// compute_update returning false likewise signals failure (propagated to the
// caller, which typically rejects the time step).
template <class Problem, class State>
SolveStats newton_solve(Problem& problem, State& x, const NewtonConfig& config) {
  SolveStats stats;
  double norm = problem.residual_norm(x);
  if (!std::isfinite(norm)) return stats; // unevaluable initial state

  State dx = x; // shape template; overwritten by compute_update
  State trial = x;
  for (int it = 0; it < config.max_iter; ++it) {
    if (norm < config.tol) {
      stats.converged = true;
      stats.final_residual = norm;
      return stats;
    }
    if (!problem.compute_update(x, dx, stats)) return stats;
    ++stats.newton_iterations;

    double step = 1.0;
    bool accepted = false;
    while (step >= config.min_step) {
      trial = x;
      problem.apply(trial, step, dx);
      const double trial_norm = problem.residual_norm(trial);
      if (trial_norm < norm) {
        x = trial;
        norm = trial_norm;
        accepted = true;
        break;
      }
      ++stats.line_search_rejections;
      step *= 0.5;
    }
    if (!accepted) {
      stats.final_residual = norm;
      return stats; // stalled line search
    }
  }
  stats.converged = norm < config.tol;
  stats.final_residual = norm;
  return stats;
}

} // namespace hdgflow

#endif
