#include "hdgflow/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace hdgflow {

namespace {

// Legendre P_n and derivative on [-1,1] by the three-term recurrence.
void legendre_eval(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

// Gauss-Legendre nodes/weights on [-1,1] via Newton on the Legendre roots.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n / 2 + n % 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p = 0, dp = 1;
    for (int it = 0; it < 100; ++it) {
      legendre_eval(n, z, p, dp);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    legendre_eval(n, z, p, dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

constexpr int kMaxPoints1D = 13; // degree up to 2*13-1 = 25

} // namespace

QuadratureRule1D edge_quadrature(int order) {
  if (order < 0) throw std::invalid_argument("edge_quadrature: negative order");
  const int n = order / 2 + 1; // 2n-1 >= order
  if (n > kMaxPoints1D)
    throw std::invalid_argument("edge_quadrature: order " + std::to_string(order) +
                                " beyond supported table");
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule1D rule;
  rule.exact_order = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = 0.5 * (x[i] + 1.0);
    rule.weights[i] = 0.5 * w[i];
  }
  return rule;
}

QuadratureRule triangle_quadrature(int order) {
  if (order < 0) throw std::invalid_argument("triangle_quadrature: negative order");
  // Collapsed map (a,b) in [-1,1]^2 -> (xi,eta): the Jacobian factor (1-b)/8
  // raises the needed b-degree by one.
  const int n = (order + 1) / 2 + 1; // 2n-1 >= order+1
  if (n > kMaxPoints1D)
    throw std::invalid_argument("triangle_quadrature: order " + std::to_string(order) +
                                " beyond supported table");
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.exact_order = 2 * n - 2;
  rule.xi.reserve(n * n);
  rule.eta.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = x[i], b = x[j];
      rule.xi.push_back(0.25 * (1.0 + a) * (1.0 - b));
      rule.eta.push_back(0.5 * (1.0 + b));
      rule.weights.push_back(w[i] * w[j] * (1.0 - b) / 8.0);
    }
  return rule;
}

} // namespace hdgflow
