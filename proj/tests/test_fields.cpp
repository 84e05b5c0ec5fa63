#include <doctest.h>

#include "hdgflow/fields.hpp"

#include <cmath>
#include <random>

using namespace hdgflow;

namespace {

Discretization make_disc(int nx, int p, int m = 1) {
  return Discretization(generate_structured(nx, nx, {-0.5, -0.5, 0.5, 0.5}), p, m);
}

double gaussian(double x, double y) { return std::exp(-50.0 * (x * x + y * y)); }

} // namespace

TEST_CASE("physical mass matrices are det_jac * identity") {
  const Discretization disc = make_disc(2, 3);
  for (int k : {0, 3, 7}) {
    const auto& g = disc.geom(k);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(disc.np(), disc.np());
    for (int q = 0; q < disc.nq(); ++q)
      mass += g.det_jac * disc.volume_rule().weights[q] * disc.phi().col(q) *
              disc.phi().col(q).transpose();
    CHECK((mass - 2.0 * g.area * Eigen::MatrixXd::Identity(disc.np(), disc.np()))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
  }
}

TEST_CASE("projection reproduces polynomials of degree <= p") {
  const Discretization disc = make_disc(3, 2);
  auto poly = [](double x, double y, Eigen::Ref<Eigen::VectorXd> out) {
    out[0] = 1.5 - 2.0 * x + 0.5 * y + x * y - 0.25 * x * x;
  };
  const Eigen::VectorXd coeffs = project_elements(disc, poly);
  Eigen::VectorXd val(1), ref(1);
  for (int k = 0; k < disc.num_elements(); ++k)
    for (int q = 0; q < disc.nq(); ++q) {
      const Eigen::Vector2d x = disc.volume_points(k).col(q);
      eval_w(disc, coeffs, k, x, val);
      poly(x(0), x(1), ref);
      CHECK(val[0] == doctest::Approx(ref[0]).epsilon(1e-12));
    }
}

TEST_CASE("projection of zero is zero") {
  const Discretization disc = make_disc(2, 3);
  auto zero = [](double, double, Eigen::Ref<Eigen::VectorXd> out) { out[0] = 0.0; };
  CHECK(project_elements(disc, zero).cwiseAbs().maxCoeff() == 0.0);
  CHECK(project_edges(disc, zero).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("projection error of the Gaussian decays at order p+1") {
  auto f = [](double x, double y, Eigen::Ref<Eigen::VectorXd> out) { out[0] = gaussian(x, y); };
  auto exact = [](double x, double y, double, Eigen::Ref<Eigen::VectorXd> out) {
    out[0] = gaussian(x, y);
  };
  for (int p : {2, 3}) {
    double prev = 0;
    std::vector<double> errors;
    for (int nx : {8, 16, 32}) {
      const Discretization disc = make_disc(nx, p);
      const Eigen::VectorXd coeffs = project_elements(disc, f);
      errors.push_back(l2_error(disc, coeffs, exact, 0.0));
    }
    const double order = std::log2(errors[1] / errors[2]);
    CHECK(order == doctest::Approx(p + 1).epsilon(0.12));
    (void)prev;
  }
}

TEST_CASE("l2_error basic values") {
  const Discretization disc = make_disc(4, 2);
  auto f = [](double x, double y, Eigen::Ref<Eigen::VectorXd> out) {
    out[0] = std::sin(3 * x) + y;
  };
  const Eigen::VectorXd coeffs = project_elements(disc, f);

  // exact = the projected field itself -> 0
  auto self = [&](double x, double y, double, Eigen::Ref<Eigen::VectorXd> out) {
    // evaluate the discrete field by locating the element is overkill here;
    // instead compare against the projected values through quadrature identity
    out[0] = 0.0;
    (void)x;
    (void)y;
  };
  (void)self;
  CHECK(l2_norm_w(disc, coeffs - coeffs) == 0.0);

  // constant 1 vs exact 0 on the unit-area domain -> 1
  auto one = [](double, double, Eigen::Ref<Eigen::VectorXd> out) { out[0] = 1.0; };
  auto zero_exact = [](double, double, double, Eigen::Ref<Eigen::VectorXd> out) { out[0] = 0.0; };
  const Eigen::VectorXd ones = project_elements(disc, one);
  CHECK(l2_error(disc, ones, zero_exact, 0.0) == doctest::Approx(1.0).epsilon(1e-13));

  // p=3 projection beats p=2 on the same mesh
  auto g = [](double x, double y, Eigen::Ref<Eigen::VectorXd> out) { out[0] = gaussian(x, y); };
  auto g_exact = [](double x, double y, double, Eigen::Ref<Eigen::VectorXd> out) {
    out[0] = gaussian(x, y);
  };
  const Discretization d2 = make_disc(16, 2), d3 = make_disc(16, 3);
  CHECK(l2_error(d3, project_elements(d3, g), g_exact, 0.0) <
        l2_error(d2, project_elements(d2, g), g_exact, 0.0));
}

TEST_CASE("l2_norm_w is a norm (homogeneity and triangle inequality)") {
  const Discretization disc = make_disc(3, 2);
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  const Eigen::Index n = static_cast<Eigen::Index>(disc.num_elements()) * disc.np();
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd a(n), b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      a[i] = dist(rng);
      b[i] = dist(rng);
    }
    const double na = l2_norm_w(disc, a), nb = l2_norm_w(disc, b);
    CHECK(l2_norm_w(disc, 2.5 * a) == doctest::Approx(2.5 * na).epsilon(1e-13));
    CHECK(l2_norm_w(disc, a + b) <= na + nb + 1e-13);
  }
}

TEST_CASE("l2_norm_w matches brute-force quadrature") {
  const Discretization disc = make_disc(3, 3);
  std::mt19937 rng(11);
  std::normal_distribution<double> dist;
  Eigen::VectorXd coeffs(static_cast<Eigen::Index>(disc.num_elements()) * disc.np());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs[i] = dist(rng);

  double acc = 0;
  Eigen::VectorXd val(1);
  for (int k = 0; k < disc.num_elements(); ++k)
    for (int q = 0; q < disc.nq(); ++q) {
      eval_w(disc, coeffs, k, disc.volume_points(k).col(q), val);
      acc += disc.geom(k).det_jac * disc.volume_rule().weights[q] * val[0] * val[0];
    }
  CHECK(l2_norm_w(disc, coeffs) == doctest::Approx(std::sqrt(acc)).epsilon(1e-13));
}
