#ifndef HDGFLOW_FIELDS_HPP
#define HDGFLOW_FIELDS_HPP

#include "hdgflow/disc.hpp"

#include <Eigen/Dense>
#include <functional>

namespace hdgflow {

// The discrete unknown (sigma_h, w_h, lambda_h) as flat coefficient vectors.
// Layouts (all component-major within an entity):
//   w:      element k, component c, mode t     ->  (k*m + c)*np + t
//   sigma:  element k, component c, direction d, mode t
//                                              ->  ((k*m + c)*2 + d)*np + t
//   lambda: edge e, component c, mode j        ->  (e*m + c)*ne + j
struct StateTriple {
  Eigen::VectorXd sigma;
  Eigen::VectorXd w;
  Eigen::VectorXd lambda;
  int m = 0, np = 0, ne = 0;

  static StateTriple zero(const Discretization& disc);

  // per-entity coefficient blocks
  auto w_elem(int k) { return w.segment(static_cast<Eigen::Index>(k) * m * np, m * np); }
  auto w_elem(int k) const { return w.segment(static_cast<Eigen::Index>(k) * m * np, m * np); }
  auto sigma_elem(int k) {
    return sigma.segment(static_cast<Eigen::Index>(k) * 2 * m * np, 2 * m * np);
  }
  auto sigma_elem(int k) const {
    return sigma.segment(static_cast<Eigen::Index>(k) * 2 * m * np, 2 * m * np);
  }
  auto lambda_edge(int e) { return lambda.segment(static_cast<Eigen::Index>(e) * m * ne, m * ne); }
  auto lambda_edge(int e) const {
    return lambda.segment(static_cast<Eigen::Index>(e) * m * ne, m * ne);
  }

  void axpy(double a, const StateTriple& d) {
    sigma += a * d.sigma;
    w += a * d.w;
    lambda += a * d.lambda;
  }
};

using ScalarField = std::function<double(double x, double y)>;
using VectorField = std::function<void(double x, double y, Eigen::Ref<Eigen::VectorXd>)>;

// Elementwise L2 projection of f onto the element space (all components).
// Output layout matches StateTriple::w.
Eigen::VectorXd project_elements(const Discretization& disc, const VectorField& f);

// Edgewise L2 projection onto the trace space; layout matches StateTriple::lambda.
Eigen::VectorXd project_edges(const Discretization& disc, const VectorField& f);

// sqrt( sum_K int_K |w_h - exact(.,t)|^2 ), quadrature of order 2p+2.
double l2_error(const Discretization& disc, const Eigen::VectorXd& w_coeffs,
                const std::function<void(double, double, double, Eigen::Ref<Eigen::VectorXd>)>& exact,
                double t);

// L2(Omega) norm of a coefficient vector in the w layout. Exact for the
// orthonormal basis: contributions are det_jac * |coeffs|^2 per element.
double l2_norm_w(const Discretization& disc, const Eigen::VectorXd& w_coeffs);

// value of the discrete field at a physical point inside element k
void eval_w(const Discretization& disc, const Eigen::VectorXd& w_coeffs, int k,
            const Eigen::Vector2d& x, Eigen::Ref<Eigen::VectorXd> out);

} // namespace hdgflow

#endif
