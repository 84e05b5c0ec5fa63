#ifndef HDGFLOW_DISC_HPP
#define HDGFLOW_DISC_HPP

#include "hdgflow/basis.hpp"
#include "hdgflow/mesh.hpp"
#include "hdgflow/quadrature.hpp"

#include <Eigen/Dense>
#include <vector>

namespace hdgflow {

// Everything the assembly loops need, precomputed once per (mesh, degree,
// component count): affine maps, quadrature, basis tables at volume points and
// at the edge points of both adjacent elements. Immutable after construction.
class Discretization {
public:
  Discretization(Mesh mesh, int degree, int components);

  const Mesh& mesh() const { return mesh_; }
  const Skeleton& skeleton() const { return skel_; }
  const ElementSpace& element_space() const { return espace_; }
  const EdgeSpace& edge_space() const { return fspace_; }

  int degree() const { return espace_.degree(); }
  int components() const { return m_; }
  int np() const { return espace_.dimension(); }  // element modes per component
  int ne() const { return fspace_.dimension(); }  // edge modes per component
  int num_elements() const { return mesh_.num_triangles(); }
  int num_edges() const { return skel_.num_edges(); }

  // quadrature (order 2p+2 throughout)
  const QuadratureRule& volume_rule() const { return vol_rule_; }
  const QuadratureRule1D& edge_rule() const { return edge_rule_; }
  int nq() const { return vol_rule_.size(); }
  int nqe() const { return edge_rule_.size(); }

  struct ElementGeometry {
    Eigen::Matrix2d jac;      // affine map reference -> physical
    Eigen::Matrix2d jac_inv_t;
    double det_jac;           // = 2 * area
    double area;
    Eigen::Vector2d origin;   // image of (0,0)
  };
  const ElementGeometry& geom(int k) const { return geoms_[k]; }

  // basis tables at volume quadrature points (np x nq)
  const Eigen::MatrixXd& phi() const { return phi_; }
  // physical-gradient tables per element, direction d in {0,1} (np x nq)
  const Eigen::MatrixXd& grad_phys(int k, int d) const { return grad_phys_[2 * k + d]; }

  // edge basis at edge quadrature points (ne x nqe)
  const Eigen::MatrixXd& edge_phi() const { return edge_phi_; }
  // element basis traces at the edge quadrature points of edge e, seen from
  // its left (side 0) or right (side 1) element (np x nqe)
  const Eigen::MatrixXd& trace_phi(int e, int side) const { return trace_phi_[2 * e + side]; }
  // physical coordinates of edge quadrature points (2 x nqe)
  const Eigen::MatrixXd& edge_points(int e) const { return edge_pts_[e]; }
  // physical coordinates of volume quadrature points of element k (2 x nq)
  const Eigen::MatrixXd& volume_points(int k) const { return vol_pts_[k]; }

  // map a physical point to reference coordinates of element k
  Eigen::Vector2d to_reference(int k, const Eigen::Vector2d& x) const;

private:
  Mesh mesh_;
  Skeleton skel_;
  ElementSpace espace_;
  EdgeSpace fspace_;
  int m_;
  QuadratureRule vol_rule_;
  QuadratureRule1D edge_rule_;
  std::vector<ElementGeometry> geoms_;
  Eigen::MatrixXd phi_;
  std::vector<Eigen::MatrixXd> grad_phys_;
  Eigen::MatrixXd edge_phi_;
  std::vector<Eigen::MatrixXd> trace_phi_;
  std::vector<Eigen::MatrixXd> edge_pts_;
  std::vector<Eigen::MatrixXd> vol_pts_;
};

} // namespace hdgflow

#endif
