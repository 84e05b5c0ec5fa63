#include <doctest.h>

#include "hdgflow/basis.hpp"
#include "hdgflow/quadrature.hpp"

#include <cmath>
#include <random>

using namespace hdgflow;

namespace {

// exact monomial integrals on the reference triangle: a! b! / (a+b+2)!
double exact_tri_monomial(int a, int b) {
  double num = 1, den = 1;
  for (int i = 2; i <= a; ++i) num *= i;
  for (int i = 2; i <= b; ++i) num *= i;
  for (int i = 2; i <= a + b + 2; ++i) den *= i;
  return num / den;
}

} // namespace

TEST_CASE("triangle quadrature: weights, measure, exactness") {
  for (int order : {0, 2, 4, 6, 8, 10}) {
    const QuadratureRule rule = triangle_quadrature(order);
    double sum = 0;
    for (int q = 0; q < rule.size(); ++q) {
      CHECK(rule.weights[q] > 0);
      sum += rule.weights[q];
    }
    CHECK(sum == doctest::Approx(0.5).epsilon(1e-14));

    for (int a = 0; a + 0 <= order; ++a)
      for (int b = 0; a + b <= order; ++b) {
        double val = 0;
        for (int q = 0; q < rule.size(); ++q)
          val += rule.weights[q] * std::pow(rule.xi[q], a) * std::pow(rule.eta[q], b);
        CHECK(val == doctest::Approx(exact_tri_monomial(a, b)).epsilon(1e-12));
      }
  }
  CHECK_THROWS_AS(triangle_quadrature(40), std::invalid_argument);
}

TEST_CASE("triangle quadrature integrates x^2 y to 1/60") {
  const QuadratureRule rule = triangle_quadrature(3);
  double val = 0;
  for (int q = 0; q < rule.size(); ++q)
    val += rule.weights[q] * rule.xi[q] * rule.xi[q] * rule.eta[q];
  CHECK(val == doctest::Approx(1.0 / 60).epsilon(1e-14));
}

TEST_CASE("edge quadrature: measure and exactness") {
  for (int order : {0, 1, 3, 5, 10}) {
    const QuadratureRule1D rule = edge_quadrature(order);
    double sum = 0;
    for (double w : rule.weights) {
      CHECK(w > 0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    for (int a = 0; a <= order; ++a) {
      double val = 0;
      for (int q = 0; q < rule.size(); ++q)
        val += rule.weights[q] * std::pow(rule.points[q], a);
      CHECK(val == doctest::Approx(1.0 / (a + 1)).epsilon(1e-13));
    }
  }
  // s^3 on [0,1]
  const QuadratureRule1D r3 = edge_quadrature(3);
  double val = 0;
  for (int q = 0; q < r3.size(); ++q)
    val += r3.weights[q] * std::pow(r3.points[q], 3);
  CHECK(val == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(edge_quadrature(99), std::invalid_argument);
}

TEST_CASE("element basis is orthonormal on the reference triangle") {
  for (int p : {0, 1, 2, 3, 4}) {
    const ElementSpace space(p);
    CHECK(space.dimension() == (p + 1) * (p + 2) / 2);
    const QuadratureRule rule = triangle_quadrature(2 * p + 2);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(space.dimension(), space.dimension());
    Eigen::VectorXd phi(space.dimension());
    for (int q = 0; q < rule.size(); ++q) {
      space.eval(rule.xi[q], rule.eta[q], phi);
      gram += rule.weights[q] * phi * phi.transpose();
    }
    CHECK((gram - Eigen::MatrixXd::Identity(space.dimension(), space.dimension()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("edge basis is orthonormal on [0,1]") {
  for (int p : {0, 1, 2, 3, 4}) {
    const EdgeSpace space(p);
    const QuadratureRule1D rule = edge_quadrature(2 * p + 2);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(space.dimension(), space.dimension());
    Eigen::VectorXd phi(space.dimension());
    for (int q = 0; q < rule.size(); ++q) {
      space.eval(rule.points[q], phi);
      gram += rule.weights[q] * phi * phi.transpose();
    }
    CHECK((gram - Eigen::MatrixXd::Identity(space.dimension(), space.dimension()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("basis gradients match central differences") {
  const ElementSpace space(4);
  const int n = space.dimension();
  Eigen::VectorXd dxi(n), deta(n), plus(n), minus(n);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> unit(0.05, 0.9);

  double worst = 0;
  const double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    double xi = unit(rng), eta = unit(rng);
    if (xi + eta > 0.95) {
      xi *= 0.5;
      eta *= 0.5;
    }
    space.eval_grad(xi, eta, dxi, deta);
    space.eval(xi + h, eta, plus);
    space.eval(xi - h, eta, minus);
    worst = std::max(worst, (dxi - (plus - minus) / (2 * h)).cwiseAbs().maxCoeff());
    space.eval(xi, eta + h, plus);
    space.eval(xi, eta - h, minus);
    worst = std::max(worst, (deta - (plus - minus) / (2 * h)).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-6); // O(h^2) central differences at h = 1e-5
}

TEST_CASE("basis values stay finite at the collapsed vertex") {
  const ElementSpace space(3);
  Eigen::VectorXd phi(space.dimension());
  space.eval(0.0, 1.0, phi);
  for (int i = 0; i < space.dimension(); ++i) CHECK(std::isfinite(phi[i]));
}
