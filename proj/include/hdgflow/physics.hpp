#ifndef HDGFLOW_PHYSICS_HPP
#define HDGFLOW_PHYSICS_HPP

#include <Eigen/Dense>
#include <functional>
#include <memory>

namespace hdgflow {

enum class BoundaryKind {
  prescribed,  // trace equation pins lambda to given data
  extrapolate, // trace equation sets lambda to the interior trace
};

struct BoundaryData {
  BoundaryKind kind = BoundaryKind::prescribed;
  Eigen::VectorXd value; // used for `prescribed`
};

// Pluggable physics behind the spatial operator: convective flux f, viscous
// flux f_v, their derivatives, trace stabilization, boundary data, and an
// exact solution when one is known. Implementations are stateless and safe
// for concurrent evaluation.
class FluxModel {
public:
  virtual ~FluxModel() = default;

  virtual int components() const = 0;
  virtual bool has_viscous() const = 0;

  // convective flux, m x 2 (column d is the flux in direction d)
  virtual void flux(const Eigen::Vector2d& x, const Eigen::VectorXd& w,
                    Eigen::Ref<Eigen::MatrixXd> out) const = 0;
  // d(flux)/dw per direction, each m x m
  virtual void flux_jacobian(const Eigen::Vector2d& x, const Eigen::VectorXd& w,
                             Eigen::Ref<Eigen::MatrixXd> a0,
                             Eigen::Ref<Eigen::MatrixXd> a1) const = 0;

  // viscous flux f_v(w, sigma), m x 2; sigma is m x 2 (gradient per component)
  virtual void viscous_flux(const Eigen::VectorXd& w, const Eigen::MatrixXd& sigma,
                            Eigen::Ref<Eigen::MatrixXd> out) const;
  // d(vec f_v)/d(vec sigma) with (c,d) flattened as c*2+d, (2m) x (2m)
  virtual void viscous_jacobian_sigma(const Eigen::VectorXd& w,
                                      Eigen::Ref<Eigen::MatrixXd> out) const;
  // d(f_v . e_d)/dw, each m x m; zero for all shipped models
  virtual void viscous_jacobian_w(const Eigen::VectorXd& w, const Eigen::MatrixXd& sigma,
                                  Eigen::Ref<Eigen::MatrixXd> d0,
                                  Eigen::Ref<Eigen::MatrixXd> d1) const;

  // trace stabilization parameters
  virtual double delta(const Eigen::Vector2d& x, const Eigen::VectorXd& lambda,
                       const Eigen::Vector2d& n) const = 0;
  virtual double tau(const Eigen::Vector2d& x, const Eigen::VectorXd& lambda,
                     const Eigen::Vector2d& n) const;

  virtual BoundaryData boundary(const Eigen::Vector2d& x, const Eigen::Vector2d& n,
                                double t) const = 0;

  virtual void initial(const Eigen::Vector2d& x, Eigen::Ref<Eigen::VectorXd> out) const = 0;

  virtual bool has_source() const { return false; }
  virtual void source(const Eigen::Vector2d& x, double t, Eigen::Ref<Eigen::VectorXd> out) const;

  virtual bool has_exact() const { return false; }
  virtual void exact(const Eigen::Vector2d& x, double t, Eigen::Ref<Eigen::VectorXd> out) const;

  // throws inadmissible_state_error for states outside the admissible set;
  // entity_id is forwarded for diagnostics
  virtual void check_admissible(const Eigen::VectorXd& w, int entity_id,
                                const Eigen::Vector2d& x) const;
};

// ---- linear rotating advection-diffusion (m = 1) --------------------------
//
// f(x, w) = (-4y, 4x)^T w,  f_v = nu * grad w, g = 0, Dirichlet data from the
// exact free-space solution. delta = |v.n|, tau = nu.
std::unique_ptr<FluxModel> make_rotating_gaussian_model(double nu = 1e-3);

// Exact solution: the rigid rotation leaves the origin-centered radial profile
// invariant, so only diffusion acts; with s(t) = 1 + 200 nu t,
//   w(x,y,t) = exp(-50 (x^2+y^2)/s) / s.
double rotating_gaussian_exact(double x, double y, double t, double nu = 1e-3);

// ---- compressible Euler (m = 4) --------------------------------------------

struct EulerState {
  double rho, rho_u, rho_v, E;
};

// primitive (rho, u, v, p) -> conservative, using the ideal gas law
EulerState euler_from_primitive(double rho, double u, double v, double p, double gamma);
double euler_pressure(const Eigen::VectorXd& w, double gamma);
double euler_sound_speed(const Eigen::VectorXd& w, double gamma);

// s = ln(p / rho^gamma); throws inadmissible_state_error for rho<=0 or p<=0
double euler_entropy(const Eigen::VectorXd& w, double gamma);

// radially symmetric expansion-wave initial data; the r = 0 limit u = v = 0 is
// used on the axis. Admissible for gamma = 3 (the smooth case).
void radial_expansion_initial(double x, double y, double gamma, Eigen::Ref<Eigen::VectorXd> out);

// Euler model with boundary classification and data supplied by a problem
// -specific function: supersonic outflow (u.n >= 0 in the data) extrapolates,
// otherwise lambda is pinned to the data. delta = |u.n| + c at the trace, tau = 0.
using EulerBoundaryState = std::function<void(const Eigen::Vector2d&, double, Eigen::Ref<Eigen::VectorXd>)>;
std::unique_ptr<FluxModel> make_euler_model(double gamma, EulerBoundaryState boundary_state,
                                            EulerBoundaryState initial_state,
                                            EulerBoundaryState exact_solution = nullptr);

// Euler model preconfigured for the radial expansion wave (gamma defaults to 3;
// the far field is supersonic so the whole box boundary extrapolates).
std::unique_ptr<FluxModel> make_radial_expansion_model(double gamma = 3.0);

// spatially constant free stream, handy for preservation tests
std::unique_ptr<FluxModel> make_free_stream_model(double gamma, const EulerState& state);

} // namespace hdgflow

#endif
