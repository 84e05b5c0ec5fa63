#include "hdgflow/physics.hpp"
#include "hdgflow/errors.hpp"

#include <cmath>

namespace hdgflow {

void FluxModel::viscous_flux(const Eigen::VectorXd&, const Eigen::MatrixXd&,
                             Eigen::Ref<Eigen::MatrixXd> out) const {
  out.setZero();
}

void FluxModel::viscous_jacobian_sigma(const Eigen::VectorXd&,
                                       Eigen::Ref<Eigen::MatrixXd> out) const {
  out.setZero();
}

void FluxModel::viscous_jacobian_w(const Eigen::VectorXd&, const Eigen::MatrixXd&,
                                   Eigen::Ref<Eigen::MatrixXd> d0,
                                   Eigen::Ref<Eigen::MatrixXd> d1) const {
  d0.setZero();
  d1.setZero();
}

double FluxModel::tau(const Eigen::Vector2d&, const Eigen::VectorXd&,
                      const Eigen::Vector2d&) const {
  return 0.0;
}

void FluxModel::source(const Eigen::Vector2d&, double, Eigen::Ref<Eigen::VectorXd> out) const {
  out.setZero();
}

void FluxModel::exact(const Eigen::Vector2d&, double, Eigen::Ref<Eigen::VectorXd>) const {
  throw std::logic_error("FluxModel::exact: no exact solution available");
}

void FluxModel::check_admissible(const Eigen::VectorXd&, int, const Eigen::Vector2d&) const {}

// ---------------------------------------------------------------------------

double rotating_gaussian_exact(double x, double y, double t, double nu) {
  const double s = 1.0 + 200.0 * nu * t;
  return std::exp(-50.0 * (x * x + y * y) / s) / s;
}

namespace {

class RotatingGaussianModel final : public FluxModel {
public:
  explicit RotatingGaussianModel(double nu) : nu_(nu) {
    if (nu < 0) throw std::invalid_argument("rotating gaussian model: nu must be >= 0");
  }

  int components() const override { return 1; }
  bool has_viscous() const override { return nu_ > 0; }

  void flux(const Eigen::Vector2d& x, const Eigen::VectorXd& w,
            Eigen::Ref<Eigen::MatrixXd> out) const override {
    out(0, 0) = -4.0 * x(1) * w(0);
    out(0, 1) = 4.0 * x(0) * w(0);
  }

  void flux_jacobian(const Eigen::Vector2d& x, const Eigen::VectorXd&,
                     Eigen::Ref<Eigen::MatrixXd> a0,
                     Eigen::Ref<Eigen::MatrixXd> a1) const override {
    a0(0, 0) = -4.0 * x(1);
    a1(0, 0) = 4.0 * x(0);
  }

  void viscous_flux(const Eigen::VectorXd&, const Eigen::MatrixXd& sigma,
                    Eigen::Ref<Eigen::MatrixXd> out) const override {
    out = nu_ * sigma;
  }

  void viscous_jacobian_sigma(const Eigen::VectorXd&,
                              Eigen::Ref<Eigen::MatrixXd> out) const override {
    out = nu_ * Eigen::Matrix2d::Identity();
  }

  double delta(const Eigen::Vector2d& x, const Eigen::VectorXd&,
               const Eigen::Vector2d& n) const override {
    return std::abs(-4.0 * x(1) * n(0) + 4.0 * x(0) * n(1));
  }

  double tau(const Eigen::Vector2d&, const Eigen::VectorXd&,
             const Eigen::Vector2d&) const override {
    return nu_;
  }

  BoundaryData boundary(const Eigen::Vector2d& x, const Eigen::Vector2d&,
                        double t) const override {
    BoundaryData bd;
    bd.kind = BoundaryKind::prescribed;
    bd.value = Eigen::VectorXd::Constant(1, rotating_gaussian_exact(x(0), x(1), t, nu_));
    return bd;
  }

  void initial(const Eigen::Vector2d& x, Eigen::Ref<Eigen::VectorXd> out) const override {
    out(0) = rotating_gaussian_exact(x(0), x(1), 0.0, nu_);
  }

  bool has_exact() const override { return true; }
  void exact(const Eigen::Vector2d& x, double t, Eigen::Ref<Eigen::VectorXd> out) const override {
    out(0) = rotating_gaussian_exact(x(0), x(1), t, nu_);
  }

private:
  double nu_;
};

} // namespace

std::unique_ptr<FluxModel> make_rotating_gaussian_model(double nu) {
  return std::make_unique<RotatingGaussianModel>(nu);
}

// ---------------------------------------------------------------------------

EulerState euler_from_primitive(double rho, double u, double v, double p, double gamma) {
  EulerState s;
  s.rho = rho;
  s.rho_u = rho * u;
  s.rho_v = rho * v;
  s.E = p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v);
  return s;
}

double euler_pressure(const Eigen::VectorXd& w, double gamma) {
  return (gamma - 1.0) * (w(3) - 0.5 * (w(1) * w(1) + w(2) * w(2)) / w(0));
}

double euler_sound_speed(const Eigen::VectorXd& w, double gamma) {
  return std::sqrt(gamma * euler_pressure(w, gamma) / w(0));
}

double euler_entropy(const Eigen::VectorXd& w, double gamma) {
  const double rho = w(0);
  const double p = euler_pressure(w, gamma);
  if (!(rho > 0) || !(p > 0))
    throw inadmissible_state_error("euler_entropy: rho or p not positive", -1, 0, 0);
  return std::log(p / std::pow(rho, gamma));
}

void radial_expansion_initial(double x, double y, double gamma, Eigen::Ref<Eigen::VectorXd> out) {
  const double r = std::hypot(x, y);
  double q;
  if (r < 0.5) {
    q = 0.0;
  } else if (r < 1.5) {
    const double rm1 = r - 1.0;
    q = (1.0 + std::tanh(rm1 / (0.25 - rm1 * rm1))) / gamma;
  } else {
    q = 2.0 / gamma;
  }
  const double u = (r > 0) ? x / r * q : 0.0;
  const double v = (r > 0) ? y / r * q : 0.0;
  const double a = 1.0 - 0.5 * (gamma - 1.0) * q;
  const double rho = gamma * std::pow(a, 2.0 / (gamma - 1.0));
  const double p = rho * a * a / gamma;
  const EulerState s = euler_from_primitive(rho, u, v, p, gamma);
  out(0) = s.rho;
  out(1) = s.rho_u;
  out(2) = s.rho_v;
  out(3) = s.E;
}

namespace {

class EulerModel final : public FluxModel {
public:
  EulerModel(double gamma, EulerBoundaryState boundary_state, EulerBoundaryState initial_state,
             EulerBoundaryState exact_solution)
      : gamma_(gamma),
        boundary_state_(std::move(boundary_state)),
        initial_state_(std::move(initial_state)),
        exact_(std::move(exact_solution)) {
    if (!(gamma > 1.0)) throw std::invalid_argument("euler model: gamma must be > 1");
  }

  int components() const override { return 4; }
  bool has_viscous() const override { return false; }

  void flux(const Eigen::Vector2d&, const Eigen::VectorXd& w,
            Eigen::Ref<Eigen::MatrixXd> out) const override {
    const double rho = w(0), u = w(1) / w(0), v = w(2) / w(0), E = w(3);
    const double p = euler_pressure(w, gamma_);
    out(0, 0) = rho * u;
    out(1, 0) = p + rho * u * u;
    out(2, 0) = rho * u * v;
    out(3, 0) = u * (E + p);
    out(0, 1) = rho * v;
    out(1, 1) = rho * u * v;
    out(2, 1) = p + rho * v * v;
    out(3, 1) = v * (E + p);
  }

  void flux_jacobian(const Eigen::Vector2d&, const Eigen::VectorXd& w,
                     Eigen::Ref<Eigen::MatrixXd> a0,
                     Eigen::Ref<Eigen::MatrixXd> a1) const override {
    const double u = w(1) / w(0), v = w(2) / w(0);
    const double g = gamma_;
    const double q2 = u * u + v * v;
    const double H = (w(3) + euler_pressure(w, g)) / w(0); // total enthalpy
    // dp/dw
    const double p_r = 0.5 * (g - 1.0) * q2;
    const double p_ru = -(g - 1.0) * u;
    const double p_rv = -(g - 1.0) * v;
    const double p_E = g - 1.0;

    a0(0, 0) = 0;         a0(0, 1) = 1;             a0(0, 2) = 0;             a0(0, 3) = 0;
    a0(1, 0) = p_r - u * u; a0(1, 1) = p_ru + 2 * u; a0(1, 2) = p_rv;          a0(1, 3) = p_E;
    a0(2, 0) = -u * v;    a0(2, 1) = v;             a0(2, 2) = u;             a0(2, 3) = 0;
    a0(3, 0) = u * (p_r - H); a0(3, 1) = H + u * p_ru; a0(3, 2) = u * p_rv;   a0(3, 3) = u * (1 + p_E);

    a1(0, 0) = 0;         a1(0, 1) = 0;             a1(0, 2) = 1;             a1(0, 3) = 0;
    a1(1, 0) = -u * v;    a1(1, 1) = v;             a1(1, 2) = u;             a1(1, 3) = 0;
    a1(2, 0) = p_r - v * v; a1(2, 1) = p_ru;        a1(2, 2) = p_rv + 2 * v;  a1(2, 3) = p_E;
    a1(3, 0) = v * (p_r - H); a1(3, 1) = v * p_ru;  a1(3, 2) = H + v * p_rv;  a1(3, 3) = v * (1 + p_E);
  }

  double delta(const Eigen::Vector2d&, const Eigen::VectorXd& lambda,
               const Eigen::Vector2d& n) const override {
    const double un = (lambda(1) * n(0) + lambda(2) * n(1)) / lambda(0);
    return std::abs(un) + euler_sound_speed(lambda, gamma_);
  }

  BoundaryData boundary(const Eigen::Vector2d& x, const Eigen::Vector2d& n,
                        double t) const override {
    BoundaryData bd;
    bd.value.resize(4);
    boundary_state_(x, t, bd.value);
    const double un = (bd.value(1) * n(0) + bd.value(2) * n(1)) / bd.value(0);
    bd.kind = (un >= 0) ? BoundaryKind::extrapolate : BoundaryKind::prescribed;
    return bd;
  }

  void initial(const Eigen::Vector2d& x, Eigen::Ref<Eigen::VectorXd> out) const override {
    initial_state_(x, 0.0, out);
  }

  bool has_exact() const override { return static_cast<bool>(exact_); }
  void exact(const Eigen::Vector2d& x, double t, Eigen::Ref<Eigen::VectorXd> out) const override {
    if (!exact_) throw std::logic_error("euler model: no exact solution");
    exact_(x, t, out);
  }

  void check_admissible(const Eigen::VectorXd& w, int entity_id,
                        const Eigen::Vector2d& x) const override {
    if (!(w(0) > 0))
      throw inadmissible_state_error("non-positive density", entity_id, x(0), x(1));
    if (!(euler_pressure(w, gamma_) > 0))
      throw inadmissible_state_error("non-positive pressure", entity_id, x(0), x(1));
  }

private:
  double gamma_;
  EulerBoundaryState boundary_state_;
  EulerBoundaryState initial_state_;
  EulerBoundaryState exact_;
};

} // namespace

std::unique_ptr<FluxModel> make_euler_model(double gamma, EulerBoundaryState boundary_state,
                                            EulerBoundaryState initial_state,
                                            EulerBoundaryState exact_solution) {
  return std::make_unique<EulerModel>(gamma, std::move(boundary_state), std::move(initial_state),
                                      std::move(exact_solution));
}

std::unique_ptr<FluxModel> make_radial_expansion_model(double gamma) {
  // the wave never reaches the box boundary by T = 2, so boundary data stay at
  // the (time-independent) initial far field
  auto state = [gamma](const Eigen::Vector2d& x, double, Eigen::Ref<Eigen::VectorXd> out) {
    radial_expansion_initial(x(0), x(1), gamma, out);
  };
  return make_euler_model(gamma, state, state);
}

std::unique_ptr<FluxModel> make_free_stream_model(double gamma, const EulerState& s) {
  auto state = [s](const Eigen::Vector2d&, double, Eigen::Ref<Eigen::VectorXd> out) {
    out(0) = s.rho;
    out(1) = s.rho_u;
    out(2) = s.rho_v;
    out(3) = s.E;
  };
  return make_euler_model(gamma, state, state);
}

} // namespace hdgflow
