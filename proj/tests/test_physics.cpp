#include <doctest.h>

#include "hdgflow/errors.hpp"
#include "hdgflow/physics.hpp"

#include <cmath>
#include <random>

using namespace hdgflow;

namespace {

// fourth-order central difference
template <class F>
double d4(F f, double z, double h) {
  return (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h);
}

template <class F>
double dxx4(F f, double z, double h) {
  return (-f(z + 2 * h) + 16 * f(z + h) - 30 * f(z) + 16 * f(z - h) - f(z - 2 * h)) /
         (12 * h * h);
}

double max_jacobian_fd_error(const FluxModel& model, const Eigen::Vector2d& x,
                             const Eigen::VectorXd& w) {
  const int m = model.components();
  Eigen::MatrixXd a0(m, m), a1(m, m), f_p(m, 2), f_m(m, 2);
  model.flux_jacobian(x, w, a0, a1);
  const double h = 1e-7;
  double worst = 0;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd wp = w, wm = w;
    wp[j] += h;
    wm[j] -= h;
    model.flux(x, wp, f_p);
    model.flux(x, wm, f_m);
    const Eigen::MatrixXd fd = (f_p - f_m) / (2 * h);
    for (int i = 0; i < m; ++i) {
      const double scale = std::max({1.0, std::abs(a0(i, j)), std::abs(a1(i, j))});
      worst = std::max(worst, std::abs(a0(i, j) - fd(i, 0)) / scale);
      worst = std::max(worst, std::abs(a1(i, j) - fd(i, 1)) / scale);
    }
  }
  return worst;
}

} // namespace

TEST_CASE("rotating-gaussian model: flux values") {
  const auto model = make_rotating_gaussian_model();
  Eigen::MatrixXd f(1, 2);
  Eigen::VectorXd w(1);
  w << 2.0;
  model->flux(Eigen::Vector2d(0.5, 0.0), w, f);
  CHECK(f(0, 0) == doctest::Approx(0.0));
  CHECK(f(0, 1) == doctest::Approx(4.0));

  Eigen::MatrixXd sigma(1, 2), fv(1, 2);
  sigma << 3.0, -1.0;
  model->viscous_flux(w, sigma, fv);
  CHECK(fv(0, 0) == doctest::Approx(0.003));
  CHECK(fv(0, 1) == doctest::Approx(-0.001));
}

TEST_CASE("rotation field is divergence free") {
  // d/dx(-4y) + d/dy(4x) = 0 identically; check by finite differences of the
  // flux of a constant state
  const auto model = make_rotating_gaussian_model();
  Eigen::VectorXd w(1);
  w << 1.0;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> pos(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const double x = pos(rng), y = pos(rng);
    auto fx = [&](double xx) {
      Eigen::MatrixXd f(1, 2);
      model->flux(Eigen::Vector2d(xx, y), w, f);
      return f(0, 0);
    };
    auto fy = [&](double yy) {
      Eigen::MatrixXd f(1, 2);
      model->flux(Eigen::Vector2d(x, yy), w, f);
      return f(0, 1);
    };
    CHECK(std::abs(d4(fx, x, 1e-4) + d4(fy, y, 1e-4)) < 1e-9);
  }
}

TEST_CASE("rotating-gaussian exact solution satisfies the PDE") {
  const double nu = 1e-3;
  CHECK(rotating_gaussian_exact(0, 0, 0) == doctest::Approx(1.0));
  CHECK(rotating_gaussian_exact(0.3, -0.2, 0.0) ==
        doctest::Approx(std::exp(-50 * (0.09 + 0.04))));

  // residual of w_t + div(v w - nu grad w) under 4th-order finite differences
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> pos(-0.45, 0.45), time(0.0, 0.8);
  auto residual_at = [&](double x, double y, double t, double h) {
    auto wt = [&](double tt) { return rotating_gaussian_exact(x, y, tt, nu); };
    auto f1 = [&](double xx) { return -4 * y * rotating_gaussian_exact(xx, y, t, nu); };
    auto f2 = [&](double yy) { return 4 * x * rotating_gaussian_exact(x, yy, t, nu); };
    auto wx = [&](double xx) { return rotating_gaussian_exact(xx, y, t, nu); };
    auto wy = [&](double yy) { return rotating_gaussian_exact(x, yy, t, nu); };
    return d4(wt, t, h) + d4(f1, x, h) + d4(f2, y, h) -
           nu * (dxx4(wx, x, h) + dxx4(wy, y, h));
  };
  double worst1 = 0, worst2 = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double x = pos(rng), y = pos(rng), t = time(rng);
    worst1 = std::max(worst1, std::abs(residual_at(x, y, t, 1e-3)));
    worst2 = std::max(worst2, std::abs(residual_at(x, y, t, 2e-3)));
  }
  CHECK(worst1 < 1e-7);
  CHECK(worst2 < 16 * 1e-7); // vanishes under stencil refinement
  CHECK(worst1 < worst2);
}

TEST_CASE("euler model: flux values at reference states") {
  const double gamma = 1.4;
  const auto model = make_free_stream_model(gamma, euler_from_primitive(1, 0, 0, 1, gamma));
  Eigen::MatrixXd f(4, 2);
  Eigen::VectorXd w(4);

  // rest state
  const EulerState rest = euler_from_primitive(1, 0, 0, 1, gamma);
  w << rest.rho, rest.rho_u, rest.rho_v, rest.E;
  model->flux(Eigen::Vector2d::Zero(), w, f);
  CHECK(f(0, 0) == doctest::Approx(0.0));
  CHECK(f(1, 0) == doctest::Approx(1.0));
  CHECK(f(2, 0) == doctest::Approx(0.0));
  CHECK(f(3, 0) == doctest::Approx(0.0));
  CHECK(f(0, 1) == doctest::Approx(0.0));
  CHECK(f(1, 1) == doctest::Approx(0.0));
  CHECK(f(2, 1) == doctest::Approx(1.0));
  CHECK(f(3, 1) == doctest::Approx(0.0));

  // (rho,u,v,p) = (1,1,0,1): E = 1/0.4 + 0.5 = 3, f1 = (1, 2, 0, 4)
  const EulerState s = euler_from_primitive(1, 1, 0, 1, gamma);
  CHECK(s.E == doctest::Approx(3.0));
  w << s.rho, s.rho_u, s.rho_v, s.E;
  model->flux(Eigen::Vector2d::Zero(), w, f);
  CHECK(f(0, 0) == doctest::Approx(1.0));
  CHECK(f(1, 0) == doctest::Approx(2.0));
  CHECK(f(2, 0) == doctest::Approx(0.0));
  CHECK(f(3, 0) == doctest::Approx(4.0));

  CHECK(max_jacobian_fd_error(*model, Eigen::Vector2d::Zero(), w) < 1e-6);
}

TEST_CASE("euler flux jacobians pass finite differences at random states") {
  const double gamma = 1.4;
  const auto model = make_free_stream_model(gamma, euler_from_primitive(1, 0, 0, 1, gamma));
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> rho(0.3, 3.0), vel(-2.0, 2.0), pres(0.2, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const EulerState s = euler_from_primitive(rho(rng), vel(rng), vel(rng), pres(rng), gamma);
    Eigen::VectorXd w(4);
    w << s.rho, s.rho_u, s.rho_v, s.E;
    CHECK(max_jacobian_fd_error(*model, Eigen::Vector2d::Zero(), w) < 1e-6);
  }
}

TEST_CASE("euler model rejects inadmissible states") {
  const double gamma = 1.4;
  const auto model = make_free_stream_model(gamma, euler_from_primitive(1, 0, 0, 1, gamma));
  Eigen::VectorXd w(4);
  w << -1.0, 0, 0, 1.0;
  CHECK_THROWS_AS(model->check_admissible(w, 3, Eigen::Vector2d(0.5, 0.25)),
                  inadmissible_state_error);
  w << 1.0, 10.0, 0, 1.0; // kinetic energy exceeds total -> p < 0
  CHECK_THROWS_AS(model->check_admissible(w, 3, Eigen::Vector2d::Zero()),
                  inadmissible_state_error);
}

TEST_CASE("entropy values") {
  Eigen::VectorXd w(4);
  const EulerState a = euler_from_primitive(1, 0, 0, 1, 1.4);
  w << a.rho, a.rho_u, a.rho_v, a.E;
  CHECK(euler_entropy(w, 1.4) == doctest::Approx(0.0));

  const EulerState b = euler_from_primitive(3, 0, 0, 1, 3.0);
  w << b.rho, b.rho_u, b.rho_v, b.E;
  CHECK(euler_entropy(w, 3.0) == doctest::Approx(-std::log(27.0)).epsilon(1e-12));
}

TEST_CASE("radial expansion wave initial data") {
  const double gamma = 3.0;
  Eigen::VectorXd w(4);

  radial_expansion_initial(0, 0, gamma, w);
  CHECK(w(0) == doctest::Approx(3.0));
  CHECK(w(1) == doctest::Approx(0.0));
  CHECK(w(2) == doctest::Approx(0.0));
  CHECK(euler_pressure(w, gamma) == doctest::Approx(1.0));

  // far field at r = 2: q = 2/3, rho = 1, p = 1/27, Mach 2
  radial_expansion_initial(2, 0, gamma, w);
  CHECK(w(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w(1) / w(0) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(euler_pressure(w, gamma) == doctest::Approx(1.0 / 27).epsilon(1e-12));
  const double mach = std::hypot(w(1), w(2)) / w(0) / euler_sound_speed(w, gamma);
  CHECK(mach == doctest::Approx(2.0).epsilon(1e-12));

  // q is continuous at r = 3/2 (tanh -> 1)
  Eigen::VectorXd lo(4), hi(4);
  radial_expansion_initial(1.5 - 1e-9, 0, gamma, lo);
  radial_expansion_initial(1.5, 0, gamma, hi);
  CHECK(lo(1) / lo(0) == doctest::Approx(hi(1) / hi(0)).epsilon(1e-7));

  // entropy is constant in radius
  double s0 = -gamma * std::log(gamma);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double r = 4.0 * i / 999.0;
    radial_expansion_initial(r, 0, gamma, w);
    worst = std::max(worst, std::abs(euler_entropy(w, gamma) - s0));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("radial expansion data are rotationally symmetric") {
  const double gamma = 3.0;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> pos(-4.0, 4.0);
  Eigen::VectorXd a(4), b(4);
  for (int trial = 0; trial < 50; ++trial) {
    const double x = pos(rng), y = pos(rng);
    radial_expansion_initial(x, y, gamma, a);
    radial_expansion_initial(-y, x, gamma, b); // quarter turn
    CHECK(b(0) == doctest::Approx(a(0)).epsilon(1e-14));
    CHECK(b(3) == doctest::Approx(a(3)).epsilon(1e-14));
    // velocity rotates with the frame: (u,v) -> (-v, u)
    CHECK(b(1) == doctest::Approx(-a(2)).epsilon(1e-14));
    CHECK(b(2) == doctest::Approx(a(1)).epsilon(1e-14));
  }
}

TEST_CASE("galilean check: constant-state flux around a closed triangle") {
  const double gamma = 1.4;
  const auto model = make_free_stream_model(gamma, euler_from_primitive(1, 0, 0, 1, gamma));
  const EulerState s = euler_from_primitive(1.2, 0.4, -0.3, 0.8, gamma);
  Eigen::VectorXd w(4);
  w << s.rho, s.rho_u, s.rho_v, s.E;
  Eigen::MatrixXd f(4, 2);
  model->flux(Eigen::Vector2d::Zero(), w, f);
  // edges of a triangle: scaled outward normals sum to zero
  const Eigen::Vector2d p0(0, 0), p1(2, 0.5), p2(0.3, 1.7);
  auto leg = [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return Eigen::Vector2d(b(1) - a(1), -(b(0) - a(0)));
  };
  const Eigen::VectorXd total =
      f * leg(p0, p1) + f * leg(p1, p2) + f * leg(p2, p0);
  CHECK(total.cwiseAbs().maxCoeff() < 1e-14);
}
