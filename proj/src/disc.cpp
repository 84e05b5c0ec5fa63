#include "hdgflow/disc.hpp"

#include <stdexcept>

namespace hdgflow {

Discretization::Discretization(Mesh mesh, int degree, int components)
    : mesh_(std::move(mesh)),
      skel_(build_skeleton(mesh_)),
      espace_(degree),
      fspace_(degree),
      m_(components),
      vol_rule_(triangle_quadrature(2 * degree + 2)),
      edge_rule_(edge_quadrature(2 * degree + 2)) {
  if (components < 1) throw std::invalid_argument("Discretization: components must be >= 1");

  const int np = espace_.dimension();
  const int nq = vol_rule_.size();
  const int nfe = fspace_.dimension();
  const int nqe = edge_rule_.size();
  const int nelem = mesh_.num_triangles();
  const int nedge = skel_.num_edges();

  geoms_.resize(nelem);
  for (int k = 0; k < nelem; ++k) {
    const auto& t = mesh_.triangles[k];
    const auto& p0 = mesh_.vertices[t[0]];
    const auto& p1 = mesh_.vertices[t[1]];
    const auto& p2 = mesh_.vertices[t[2]];
    ElementGeometry g;
    g.origin = Eigen::Vector2d(p0[0], p0[1]);
    g.jac << p1[0] - p0[0], p2[0] - p0[0], p1[1] - p0[1], p2[1] - p0[1];
    g.det_jac = g.jac.determinant();
    g.area = 0.5 * g.det_jac;
    g.jac_inv_t = g.jac.inverse().transpose();
    geoms_[k] = g;
  }

  // reference basis values and gradients at volume points
  phi_.resize(np, nq);
  Eigen::MatrixXd dxi(np, nq), deta(np, nq);
  for (int q = 0; q < nq; ++q) {
    espace_.eval(vol_rule_.xi[q], vol_rule_.eta[q], phi_.col(q));
    espace_.eval_grad(vol_rule_.xi[q], vol_rule_.eta[q], dxi.col(q), deta.col(q));
  }
  grad_phys_.resize(2 * static_cast<size_t>(nelem));
  vol_pts_.resize(nelem);
  for (int k = 0; k < nelem; ++k) {
    const auto& g = geoms_[k];
    grad_phys_[2 * k + 0] = g.jac_inv_t(0, 0) * dxi + g.jac_inv_t(0, 1) * deta;
    grad_phys_[2 * k + 1] = g.jac_inv_t(1, 0) * dxi + g.jac_inv_t(1, 1) * deta;
    Eigen::MatrixXd pts(2, nq);
    for (int q = 0; q < nq; ++q)
      pts.col(q) = g.origin + g.jac * Eigen::Vector2d(vol_rule_.xi[q], vol_rule_.eta[q]);
    vol_pts_[k] = std::move(pts);
  }

  edge_phi_.resize(nfe, nqe);
  for (int r = 0; r < nqe; ++r) fspace_.eval(edge_rule_.points[r], edge_phi_.col(r));

  trace_phi_.resize(2 * static_cast<size_t>(nedge));
  edge_pts_.resize(nedge);
  for (int e = 0; e < nedge; ++e) {
    const auto& ed = skel_.edges[e];
    const auto& pa = mesh_.vertices[ed.a];
    const auto& pb = mesh_.vertices[ed.b];
    Eigen::MatrixXd pts(2, nqe);
    for (int r = 0; r < nqe; ++r) {
      const double s = edge_rule_.points[r];
      pts.col(r) = Eigen::Vector2d((1 - s) * pa[0] + s * pb[0], (1 - s) * pa[1] + s * pb[1]);
    }
    for (int side = 0; side < 2; ++side) {
      const int k = (side == 0) ? ed.left : ed.right;
      if (k < 0) continue;
      Eigen::MatrixXd tp(np, nqe);
      for (int r = 0; r < nqe; ++r) {
        const Eigen::Vector2d ref = to_reference(k, pts.col(r));
        espace_.eval(ref(0), ref(1), tp.col(r));
      }
      trace_phi_[2 * e + side] = std::move(tp);
    }
    edge_pts_[e] = std::move(pts);
  }
}

Eigen::Vector2d Discretization::to_reference(int k, const Eigen::Vector2d& x) const {
  const auto& g = geoms_[k];
  return g.jac.inverse() * (x - g.origin);
}

} // namespace hdgflow
