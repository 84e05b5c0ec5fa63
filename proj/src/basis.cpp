#include "hdgflow/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace hdgflow {

namespace {

// Jacobi polynomial P_n^{(alpha,beta)} and derivative at x, standard recurrence.
void jacobi_eval(int n, double alpha, double beta, double x, double& p, double& dp) {
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  double p0 = 1.0;
  double p1 = 0.5 * (alpha - beta + (alpha + beta + 2.0) * x);
  double d0 = 0.0;
  double d1 = 0.5 * (alpha + beta + 2.0);
  for (int k = 2; k <= n; ++k) {
    const double a1 = 2.0 * k * (k + alpha + beta) * (2.0 * k + alpha + beta - 2.0);
    const double a2 = (2.0 * k + alpha + beta - 1.0) * (alpha * alpha - beta * beta);
    const double a3 =
        (2.0 * k + alpha + beta - 2.0) * (2.0 * k + alpha + beta - 1.0) * (2.0 * k + alpha + beta);
    const double a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + alpha + beta);
    const double pk = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
    const double dk = ((a2 + a3 * x) * d1 + a3 * p1 - a4 * d0) / a1;
    p0 = p1;
    p1 = pk;
    d0 = d1;
    d1 = dk;
  }
  p = p1;
  dp = d1;
}

constexpr double kCollapseTol = 1e-14;

} // namespace

ElementSpace::ElementSpace(int degree) : p_(degree) {
  if (degree < 0) throw std::invalid_argument("ElementSpace: degree must be >= 0");
  np_ = (degree + 1) * (degree + 2) / 2;
  modes_.reserve(np_);
  for (int total = 0; total <= degree; ++total)
    for (int i = 0; i <= total; ++i) modes_.emplace_back(i, total - i);
}

void ElementSpace::eval(double xi, double eta, Eigen::Ref<Eigen::VectorXd> out) const {
  const double b = 2.0 * eta - 1.0;
  const double omb2 = 0.5 * (1.0 - b); // = 1 - eta
  const double a = (omb2 > kCollapseTol) ? 2.0 * xi / omb2 - 1.0 : -1.0;
  for (int m = 0; m < np_; ++m) {
    const auto [i, j] = modes_[m];
    double pa, dpa, pb, dpb;
    jacobi_eval(i, 0.0, 0.0, a, pa, dpa);
    jacobi_eval(j, 2.0 * i + 1.0, 0.0, b, pb, dpb);
    const double scale = std::sqrt(2.0 * (2.0 * i + 1.0) * (i + j + 1.0));
    out[m] = scale * pa * std::pow(omb2, i) * pb;
  }
}

void ElementSpace::eval_grad(double xi, double eta, Eigen::Ref<Eigen::VectorXd> d_xi,
                             Eigen::Ref<Eigen::VectorXd> d_eta) const {
  const double b = 2.0 * eta - 1.0;
  const double omb2 = 0.5 * (1.0 - b);
  if (omb2 <= kCollapseTol)
    throw std::invalid_argument("ElementSpace::eval_grad: gradient singular at eta = 1");
  const double a = 2.0 * xi / omb2 - 1.0;
  for (int m = 0; m < np_; ++m) {
    const auto [i, j] = modes_[m];
    double pa, dpa, pb, dpb;
    jacobi_eval(i, 0.0, 0.0, a, pa, dpa);
    jacobi_eval(j, 2.0 * i + 1.0, 0.0, b, pb, dpb);
    const double scale = std::sqrt(2.0 * (2.0 * i + 1.0) * (i + j + 1.0));
    const double ri = std::pow(omb2, i);
    const double rim1 = (i > 0) ? std::pow(omb2, i - 1) : 0.0;
    // chain rule through a(xi,eta) = 2 xi/(1-eta) - 1, b(eta) = 2 eta - 1
    const double f_a = dpa * ri * pb;                       // d/da at fixed b
    const double f_b = pa * (ri * dpb - 0.5 * i * rim1 * pb); // d/db at fixed a
    d_xi[m] = scale * f_a * (2.0 / omb2); // da/dxi = 2/(1-eta)
    d_eta[m] = scale * (f_a * (1.0 + a) / omb2 + 2.0 * f_b);
  }
}

EdgeSpace::EdgeSpace(int degree) : p_(degree) {
  if (degree < 0) throw std::invalid_argument("EdgeSpace: degree must be >= 0");
}

void EdgeSpace::eval(double s, Eigen::Ref<Eigen::VectorXd> out) const {
  const double x = 2.0 * s - 1.0;
  for (int k = 0; k <= p_; ++k) {
    double p, dp;
    jacobi_eval(k, 0.0, 0.0, x, p, dp);
    out[k] = std::sqrt(2.0 * k + 1.0) * p;
  }
}

} // namespace hdgflow
