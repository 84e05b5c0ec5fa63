#include "hdgflow/solvers.hpp"
#include "hdgflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hdgflow {

int BlockCsr::find(int row, int col) const {
  const auto first = col_idx.begin() + row_ptr[row];
  const auto last = col_idx.begin() + row_ptr[row + 1];
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return -1;
  return static_cast<int>(it - col_idx.begin());
}

void BlockCsr::set_zero() {
  for (auto& b : blocks) b.setZero();
}

Eigen::VectorXd BlockCsr::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows());
  for (int i = 0; i < nb; ++i) {
    auto yi = y.segment(static_cast<Eigen::Index>(i) * bs, bs);
    for (int idx = row_ptr[i]; idx < row_ptr[i + 1]; ++idx)
      yi.noalias() += blocks[idx] * x.segment(static_cast<Eigen::Index>(col_idx[idx]) * bs, bs);
  }
  return y;
}

Eigen::MatrixXd BlockCsr::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows(), rows());
  for (int i = 0; i < nb; ++i)
    for (int idx = row_ptr[i]; idx < row_ptr[i + 1]; ++idx)
      d.block(static_cast<Eigen::Index>(i) * bs, static_cast<Eigen::Index>(col_idx[idx]) * bs, bs,
              bs) = blocks[idx];
  return d;
}

BlockCsr make_block_csr(int bs, const std::vector<std::vector<int>>& row_cols) {
  BlockCsr a;
  a.nb = static_cast<int>(row_cols.size());
  a.bs = bs;
  a.row_ptr.resize(a.nb + 1, 0);
  for (int i = 0; i < a.nb; ++i) a.row_ptr[i + 1] = a.row_ptr[i] + static_cast<int>(row_cols[i].size());
  a.col_idx.reserve(a.row_ptr.back());
  for (const auto& cols : row_cols)
    for (int c : cols) a.col_idx.push_back(c);
  a.blocks.assign(a.row_ptr.back(), Eigen::MatrixXd::Zero(bs, bs));
  return a;
}

namespace {

bool lu_is_singular(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
  const auto d = lu.matrixLU().diagonal().cwiseAbs();
  return !(d.minCoeff() > d.maxCoeff() * 1e-14) || !(d.maxCoeff() > 0);
}

} // namespace

void BlockIlu0::factorize(const BlockCsr& a) {
  f_ = a;
  const int nb = f_.nb;
  diag_inv_.assign(nb, Eigen::MatrixXd());
  Eigen::MatrixXd tmp;
  for (int i = 0; i < nb; ++i) {
    for (int ki = f_.row_ptr[i]; ki < f_.row_ptr[i + 1]; ++ki) {
      const int k = f_.col_idx[ki];
      if (k >= i) break;
      // L_ik = A_ik * U_kk^{-1}
      tmp.noalias() = f_.blocks[ki] * diag_inv_[k];
      f_.blocks[ki] = tmp;
      for (int ji = ki + 1; ji < f_.row_ptr[i + 1]; ++ji) {
        const int j = f_.col_idx[ji];
        const int kj = f_.find(k, j);
        if (kj >= 0) f_.blocks[ji].noalias() -= f_.blocks[ki] * f_.blocks[kj];
      }
    }
    const int di = f_.find(i, i);
    if (di < 0) throw solver_error("ilu0: missing diagonal block in row " + std::to_string(i));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(f_.blocks[di]);
    if (lu_is_singular(lu))
      throw solver_error("ilu0: zero pivot block at row " + std::to_string(i));
    diag_inv_[i] = lu.inverse();
  }
}

void BlockIlu0::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
  const int nb = f_.nb, bs = f_.bs;
  z = r;
  // forward sweep with unit block diagonal
  for (int i = 0; i < nb; ++i) {
    auto zi = z.segment(static_cast<Eigen::Index>(i) * bs, bs);
    for (int ki = f_.row_ptr[i]; ki < f_.row_ptr[i + 1]; ++ki) {
      const int k = f_.col_idx[ki];
      if (k >= i) break;
      zi.noalias() -= f_.blocks[ki] * z.segment(static_cast<Eigen::Index>(k) * bs, bs);
    }
  }
  // backward sweep
  for (int i = nb - 1; i >= 0; --i) {
    auto zi = z.segment(static_cast<Eigen::Index>(i) * bs, bs);
    for (int ji = f_.row_ptr[i + 1] - 1; ji >= f_.row_ptr[i]; --ji) {
      const int j = f_.col_idx[ji];
      if (j <= i) break;
      zi.noalias() -= f_.blocks[ji] * z.segment(static_cast<Eigen::Index>(j) * bs, bs);
    }
    zi = (diag_inv_[i] * zi).eval();
  }
}

GmresResult gmres_solve(const BlockCsr& a, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                        const LinearConfig& config, const BlockIlu0* precond,
                        SolverDiagnostics* diag) {
  const int n = a.rows();
  if (x.size() != n) x = Eigen::VectorXd::Zero(n);

  const double bnorm = b.norm();
  GmresResult res;
  if (bnorm == 0) {
    x.setZero();
    res.rel_residual = 0;
    if (diag) diag->gmres_solves += 1;
    return res;
  }
  const double target = config.rel_tol * bnorm;

  const int mr = std::max(1, config.restart);
  Eigen::MatrixXd v(n, mr + 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(mr + 1, mr);
  Eigen::VectorXd cs(mr), sn(mr), g(mr + 1), ztmp(n), wv(n);

  int total_iter = 0;
  while (true) {
    Eigen::VectorXd r = b - a.multiply(x);
    double beta = r.norm();
    if (beta <= target) {
      res.rel_residual = beta / bnorm;
      break;
    }
    v.col(0) = r / beta;
    g.setZero();
    g(0) = beta;

    int j = 0;
    for (; j < mr && total_iter < config.max_iter; ++j) {
      ++total_iter;
      if (precond) {
        precond->apply(v.col(j), ztmp);
        wv = a.multiply(ztmp);
      } else {
        wv = a.multiply(v.col(j));
      }
      for (int i = 0; i <= j; ++i) {
        h(i, j) = wv.dot(v.col(i));
        wv.noalias() -= h(i, j) * v.col(i);
      }
      h(j + 1, j) = wv.norm();
      if (h(j + 1, j) > 0) v.col(j + 1) = wv / h(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double t = cs(i) * h(i, j) + sn(i) * h(i + 1, j);
        h(i + 1, j) = -sn(i) * h(i, j) + cs(i) * h(i + 1, j);
        h(i, j) = t;
      }
      const double denom = std::hypot(h(j, j), h(j + 1, j));
      if (denom == 0) throw solver_error("gmres: breakdown (zero Hessenberg column)");
      cs(j) = h(j, j) / denom;
      sn(j) = h(j + 1, j) / denom;
      h(j, j) = denom;
      h(j + 1, j) = 0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = cs(j) * g(j);
      if (std::abs(g(j + 1)) <= target) {
        ++j;
        break;
      }
    }

    // solve the triangular least-squares system and update x
    Eigen::VectorXd y = h.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    Eigen::VectorXd update = v.leftCols(j) * y;
    if (precond) {
      precond->apply(update, ztmp);
      x += ztmp;
    } else {
      x += update;
    }

    const double true_res = (b - a.multiply(x)).norm();
    if (true_res <= target) {
      res.rel_residual = true_res / bnorm;
      break;
    }
    if (total_iter >= config.max_iter)
      throw solver_error("gmres: no convergence within " + std::to_string(config.max_iter) +
                         " iterations (rel residual " + std::to_string(true_res / bnorm) + ")");
  }

  res.iterations = total_iter;
  if (diag) {
    diag->gmres_solves += 1;
    diag->gmres_iterations += total_iter;
    diag->gmres_worst_rel_residual = std::max(diag->gmres_worst_rel_residual, res.rel_residual);
  }
  return res;
}

Eigen::VectorXd dense_lu_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("dense_lu_solve: dimension mismatch");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (lu_is_singular(lu)) throw solver_error("dense_lu_solve: matrix is singular");
  return lu.solve(b);
}

} // namespace hdgflow
