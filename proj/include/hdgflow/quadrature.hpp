#ifndef HDGFLOW_QUADRATURE_HPP
#define HDGFLOW_QUADRATURE_HPP

#include <vector>

namespace hdgflow {

// Gauss-Legendre rule on [0,1]; exact for polynomials of degree <= 2n-1.
struct QuadratureRule1D {
  std::vector<double> points;
  std::vector<double> weights;
  int exact_order = 0;
  int size() const { return static_cast<int>(points.size()); }
};

// Rule on the reference triangle {xi,eta >= 0, xi+eta <= 1} (area 1/2).
// All weights positive; exact for total degree <= exact_order.
struct QuadratureRule {
  std::vector<double> xi, eta;
  std::vector<double> weights;
  int exact_order = 0;
  int size() const { return static_cast<int>(xi.size()); }
};

// Smallest Gauss rule exact for degree `order` on [0,1].
// Supported up to order 25; beyond that throws std::invalid_argument.
QuadratureRule1D edge_quadrature(int order);

// Collapsed-coordinate product rule on the reference triangle exact for total
// degree `order` (positive weights). Supported up to order 24.
QuadratureRule triangle_quadrature(int order);

} // namespace hdgflow

#endif
