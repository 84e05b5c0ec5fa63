#ifndef HDGFLOW_BASIS_HPP
#define HDGFLOW_BASIS_HPP

#include <Eigen/Dense>

namespace hdgflow {

// Modal basis on the reference triangle {xi,eta >= 0, xi+eta <= 1}, orthonormal
// in L2: collapsed-coordinate Jacobi (Dubiner) modes scaled so the reference
// mass matrix is the identity. Modes are ordered by total degree, then by the
// xi-direction index.
class ElementSpace {
public:
  explicit ElementSpace(int degree);

  int degree() const { return p_; }
  int dimension() const { return np_; }

  // values of all modes at (xi,eta); out has length dimension()
  void eval(double xi, double eta, Eigen::Ref<Eigen::VectorXd> out) const;
  // reference-coordinate gradients; d_xi/d_eta have length dimension()
  void eval_grad(double xi, double eta, Eigen::Ref<Eigen::VectorXd> d_xi,
                 Eigen::Ref<Eigen::VectorXd> d_eta) const;

private:
  int p_;
  int np_;
  std::vector<std::pair<int, int>> modes_; // (i,j): i along xi, i+j = total degree
};

// Orthonormal 1D modal basis on the reference edge [0,1] (shifted Legendre,
// scaled so the edge mass matrix is the identity).
class EdgeSpace {
public:
  explicit EdgeSpace(int degree);

  int degree() const { return p_; }
  int dimension() const { return p_ + 1; }

  void eval(double s, Eigen::Ref<Eigen::VectorXd> out) const;

private:
  int p_;
};

} // namespace hdgflow

#endif
