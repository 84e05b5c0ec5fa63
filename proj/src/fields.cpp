#include "hdgflow/fields.hpp"

#include <cmath>

namespace hdgflow {

StateTriple StateTriple::zero(const Discretization& disc) {
  StateTriple s;
  s.m = disc.components();
  s.np = disc.np();
  s.ne = disc.ne();
  s.sigma = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.num_elements()) * 2 * s.m * s.np);
  s.w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.num_elements()) * s.m * s.np);
  s.lambda = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.num_edges()) * s.m * s.ne);
  return s;
}

Eigen::VectorXd project_elements(const Discretization& disc, const VectorField& f) {
  const int m = disc.components(), np = disc.np(), nq = disc.nq();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.num_elements()) * m * np);
  Eigen::VectorXd fx(m);
  // orthonormal reference basis: mass is det_jac * I, which cancels the det_jac
  // of the load integral, leaving coeff = sum_q w_q f(x_q) phi(q)
  for (int k = 0; k < disc.num_elements(); ++k) {
    const auto& pts = disc.volume_points(k);
    auto block = out.segment(static_cast<Eigen::Index>(k) * m * np, m * np);
    for (int q = 0; q < nq; ++q) {
      f(pts(0, q), pts(1, q), fx);
      const double wq = disc.volume_rule().weights[q];
      for (int c = 0; c < m; ++c)
        block.segment(c * np, np) += (wq * fx[c]) * disc.phi().col(q);
    }
  }
  return out;
}

Eigen::VectorXd project_edges(const Discretization& disc, const VectorField& f) {
  const int m = disc.components(), ne = disc.ne(), nqe = disc.nqe();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.num_edges()) * m * ne);
  Eigen::VectorXd fx(m);
  for (int e = 0; e < disc.num_edges(); ++e) {
    const auto& pts = disc.edge_points(e);
    auto block = out.segment(static_cast<Eigen::Index>(e) * m * ne, m * ne);
    for (int r = 0; r < nqe; ++r) {
      f(pts(0, r), pts(1, r), fx);
      const double wr = disc.edge_rule().weights[r];
      for (int c = 0; c < m; ++c)
        block.segment(c * ne, ne) += (wr * fx[c]) * disc.edge_phi().col(r);
    }
  }
  return out;
}

double l2_error(const Discretization& disc, const Eigen::VectorXd& w_coeffs,
                const std::function<void(double, double, double, Eigen::Ref<Eigen::VectorXd>)>& exact,
                double t) {
  const int m = disc.components(), np = disc.np(), nq = disc.nq();
  Eigen::VectorXd ex(m);
  double acc = 0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const auto& pts = disc.volume_points(k);
    const double dj = disc.geom(k).det_jac;
    auto block = w_coeffs.segment(static_cast<Eigen::Index>(k) * m * np, m * np);
    for (int q = 0; q < nq; ++q) {
      exact(pts(0, q), pts(1, q), t, ex);
      double dist2 = 0;
      for (int c = 0; c < m; ++c) {
        const double wh = block.segment(c * np, np).dot(disc.phi().col(q));
        dist2 += (wh - ex[c]) * (wh - ex[c]);
      }
      acc += dj * disc.volume_rule().weights[q] * dist2;
    }
  }
  return std::sqrt(acc);
}

double l2_norm_w(const Discretization& disc, const Eigen::VectorXd& w_coeffs) {
  const int m = disc.components(), np = disc.np();
  double acc = 0;
  for (int k = 0; k < disc.num_elements(); ++k)
    acc += disc.geom(k).det_jac *
           w_coeffs.segment(static_cast<Eigen::Index>(k) * m * np, m * np).squaredNorm();
  return std::sqrt(acc);
}

void eval_w(const Discretization& disc, const Eigen::VectorXd& w_coeffs, int k,
            const Eigen::Vector2d& x, Eigen::Ref<Eigen::VectorXd> out) {
  const int m = disc.components(), np = disc.np();
  const Eigen::Vector2d ref = disc.to_reference(k, x);
  Eigen::VectorXd phi(np);
  disc.element_space().eval(ref(0), ref(1), phi);
  auto block = w_coeffs.segment(static_cast<Eigen::Index>(k) * m * np, m * np);
  for (int c = 0; c < m; ++c) out[c] = block.segment(c * np, np).dot(phi);
}

} // namespace hdgflow
