#ifndef HDGFLOW_HDG_HPP
#define HDGFLOW_HDG_HPP

#include "hdgflow/disc.hpp"
#include "hdgflow/fields.hpp"
#include "hdgflow/physics.hpp"
#include "hdgflow/solvers.hpp"

#include <Eigen/Dense>
#include <vector>

namespace hdgflow {

// Weak-form residual blocks of the spatial operator, one vector per equation
// family; layouts match StateTriple. Trace rows on boundary edges carry the
// boundary-condition residual.
struct ResidualTriple {
  Eigen::VectorXd r_sigma;
  Eigen::VectorXd r_w;
  Eigen::VectorXd r_lambda;
  double lambda_norm() const { return r_lambda.norm(); }
};

// Shift defining one implicit solve F(state) = 0:
//   gradient rows:  N_sigma(state)                        = 0
//   element rows:   M (w - w_ref) + a_dt * N_w(state)     = 0
//   trace rows:     N_lambda(state)                       = 0
// With w_ref == nullptr the element rows are plain N_w (stationary solve).
struct StageShift {
  double a_dt = 0; // diagonal tableau entry times dt; must be > 0 when unsteady
  const Eigen::VectorXd* w_ref = nullptr;
  double time = 0;
};

// Stage Jacobian condensed onto the trace unknowns: the Schur complement
// K_lambda (edge-blocked sparse, coupling only edges that share an element),
// its Newton right-hand side, and the element-local factorization products
// needed to recover (d sigma, d w) from d lambda.
struct CondensedSystem {
  BlockCsr k_lambda;
  Eigen::VectorXd rhs;                       // Newton rhs for the trace update
  std::vector<Eigen::MatrixXd> local_e;      // per element, A_K^{-1} B_K
  std::vector<Eigen::VectorXd> local_h;      // per element, A_K^{-1} F_K
  double lambda_residual_norm = 0;
};

// Normal numerical fluxes at one trace point:
//   fhat   . n = f(lambda).n - delta (lambda - w_minus)
//   fhat_v . n = f_v(lambda, sigma_minus).n + tau (lambda - w_minus)
// Depends on the interior ("-") trace only. sigma_minus is m x 2.
void numerical_flux(const FluxModel& model, const Eigen::Vector2d& x,
                    const Eigen::VectorXd& lambda, const Eigen::VectorXd& w_minus,
                    const Eigen::MatrixXd& sigma_minus, const Eigen::Vector2d& n,
                    Eigen::Ref<Eigen::VectorXd> fhat_n, Eigen::Ref<Eigen::VectorXd> fhatv_n);

// Contribution of the singular time operator applied to a coefficient
// difference: only the element rows see the (diagonal) mass matrix.
ResidualTriple apply_time_operator(const Discretization& disc, const Eigen::VectorXd& dw);

// Element-local solve of the gradient equation for sigma given (w, lambda);
// also used to initialize sigma consistently with projected initial data.
Eigen::VectorXd lift_sigma(const Discretization& disc, const Eigen::VectorXd& w,
                           const Eigen::VectorXd& lambda);

// Assembly engine with reusable workspaces. Serial and deterministic; one
// instance per (discretization, model) pair, not shared across threads.
class HdgAssembler {
public:
  HdgAssembler(const Discretization& disc, const FluxModel& model);

  const Discretization& disc() const { return disc_; }
  const FluxModel& model() const { return model_; }

  // plain spatial operator N(state) at time t (stationary rows everywhere)
  ResidualTriple residual(const StateTriple& state, double t);

  // residual of the shifted stage system
  ResidualTriple stage_residual(const StateTriple& state, const StageShift& shift);

  // Newton system for the shifted stage equations, condensed to the traces.
  // Throws solver_error naming the element if a local block is singular.
  CondensedSystem assemble_condensed(const StateTriple& state, const StageShift& shift);

  // Full (sigma, w, lambda) Jacobian and residual without condensation; for
  // small meshes and cross-checks. Unknown ordering: all sigma blocks, all w
  // blocks, all lambda blocks.
  void assemble_monolithic(const StateTriple& state, const StageShift& shift,
                           Eigen::MatrixXd& jac, Eigen::VectorXd& res);

  // (d sigma, d w) from a trace update, using the stored local factorizations
  void back_substitute(const CondensedSystem& sys, const Eigen::VectorXd& dlambda,
                       Eigen::VectorXd& dsigma, Eigen::VectorXd& dw) const;

private:
  struct ElementBlocks; // scratch for one element's local system

  void element_residual(const StateTriple& state, const StageShift& shift, int k,
                        Eigen::Ref<Eigen::VectorXd> r_sigma_k, Eigen::Ref<Eigen::VectorXd> r_w_k);
  void edge_rows_residual(const StateTriple& state, const StageShift& shift, int e,
                          Eigen::Ref<Eigen::VectorXd> r_lambda_e);
  void element_system(const StateTriple& state, const StageShift& shift, int k,
                      ElementBlocks& blocks);
  void trace_diag_block(const StateTriple& state, const StageShift& shift, int e,
                        Eigen::Ref<Eigen::MatrixXd> d_block,
                        Eigen::Ref<Eigen::VectorXd> r_lambda_e);

  // flux evaluation on one side of an edge, shared by residual and Jacobian paths
  struct EdgeSideEval {
    Eigen::MatrixXd lam, wm, sig; // m x nqe, m x nqe, 2m x nqe
    Eigen::MatrixXd flux_n;       // m x nqe, (fhat - fhat_v).n
    Eigen::VectorXd pen;          // delta + tau per point
    std::vector<Eigen::MatrixXd> an; // d(f(lambda).n)/dlambda per point
    std::vector<Eigen::MatrixXd> dn; // d(f_v.n)/d(vec sigma) per point, m x 2m
    std::vector<Eigen::MatrixXd> bn; // d(f_v.n)/dw at the trace per point
    Eigen::Vector2d n;
    double len = 0;
    int elem = -1;
  };
  void eval_edge_side(const StateTriple& state, double t, int e, int side, EdgeSideEval& ev,
                      bool with_jacobian);

  const Discretization& disc_;
  const FluxModel& model_;
  int m_, np_, ne_, nq_, nqe_;
  int nloc_, bs_;

  // trace-system sparsity (edges sharing an element), built once
  BlockCsr csr_template_;

  // workspaces
  Eigen::VectorXd wq_, gq_, lamq_, wminus_, fhat_;
  Eigen::MatrixXd fq_, fvq_, sigq_, a0_, a1_, dsig_, an_;
};

} // namespace hdgflow

#endif
