#ifndef HDGFLOW_SOLVERS_HPP
#define HDGFLOW_SOLVERS_HPP

#include <Eigen/Dense>
#include <vector>

namespace hdgflow {

struct LinearConfig {
  double rel_tol = 1e-4;
  int restart = 30;
  int max_iter = 500;
};

struct NewtonConfig {
  double tol = 1e-10;   // absolute, on the trace-equation residual 2-norm
  int max_iter = 30;
  double min_step = 1.0 / 256.0; // smallest line-search fraction
};

// Accumulated per-solve counters; one instance is threaded through a whole run
// so the linear/nonlinear solver contracts can be checked after the fact.
struct SolverDiagnostics {
  long gmres_solves = 0;
  long gmres_iterations = 0;
  double gmres_worst_rel_residual = 0;
  long newton_iterations = 0;
  long newton_failures = 0;
};

struct SolveStats {
  int newton_iterations = 0;
  int line_search_rejections = 0;
  bool converged = false;
  double final_residual = 0;
};

// Square block-sparse matrix in CSR-of-blocks form; all blocks are bs x bs and
// column indices are strictly ascending within a row.
struct BlockCsr {
  int nb = 0; // block rows
  int bs = 1; // block size
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  std::vector<Eigen::MatrixXd> blocks;

  int rows() const { return nb * bs; }
  int find(int row, int col) const; // index into blocks, or -1
  void set_zero();
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd to_dense() const;
};

// Builds the CSR pattern from a per-row sorted adjacency list (must include
// the diagonal).
BlockCsr make_block_csr(int bs, const std::vector<std::vector<int>>& row_cols);

// Zero-fill-in incomplete block LU: factors live on the sparsity pattern of A.
// Exact for block-triangular matrices. Throws solver_error on a singular
// diagonal pivot block.
class BlockIlu0 {
public:
  void factorize(const BlockCsr& a);
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const;

private:
  BlockCsr f_;
  std::vector<Eigen::MatrixXd> diag_inv_; // inverted pivot blocks
};

struct GmresResult {
  int iterations = 0;
  double rel_residual = 0;
};

// Restarted GMRES, right-preconditioned when `precond` is non-null, so the
// convergence test is on the true residual: ||b - A x|| <= rel_tol * ||b||.
// Throws solver_error if max_iter is exhausted.
GmresResult gmres_solve(const BlockCsr& a, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                        const LinearConfig& config, const BlockIlu0* precond,
                        SolverDiagnostics* diag = nullptr);

// Partial-pivoting dense solve; throws solver_error when the matrix is
// singular to machine precision.
Eigen::VectorXd dense_lu_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

} // namespace hdgflow

#endif
