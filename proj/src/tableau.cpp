#include "hdgflow/tableau.hpp"

#include <cmath>
#include <stdexcept>

namespace hdgflow {

void ButcherTableau::validate(double row_sum_tol) const {
  if (stages < 1 || a.rows() != stages || a.cols() != stages || beta.size() != stages ||
      gamma1.size() != stages || gamma2.size() != stages)
    throw std::invalid_argument("tableau " + name + ": inconsistent dimensions");
  for (int i = 0; i < stages; ++i) {
    if (a(i, i) == 0)
      throw std::invalid_argument("tableau " + name + ": zero diagonal entry (stage " +
                                  std::to_string(i) + ")");
    for (int j = i + 1; j < stages; ++j)
      if (a(i, j) != 0) throw std::invalid_argument("tableau " + name + ": not lower triangular");
    if (std::abs(a.row(i).sum() - beta(i)) > row_sum_tol)
      throw std::invalid_argument("tableau " + name + ": row sum != beta (stage " +
                                  std::to_string(i) + ")");
  }
  if (std::abs(gamma1.sum() - 1.0) > row_sum_tol || std::abs(gamma2.sum() - 1.0) > row_sum_tol)
    throw std::invalid_argument("tableau " + name + ": weights do not sum to 1");
}

TableauName tableau_name_from_string(const std::string& s) {
  if (s == "hairer_wanner") return TableauName::hairer_wanner;
  if (s == "al_rabeh") return TableauName::al_rabeh;
  if (s == "cash") return TableauName::cash;
  throw std::invalid_argument("unknown tableau name: " + s);
}

ButcherTableau tableau(TableauName name) {
  ButcherTableau t;
  switch (name) {
    case TableauName::hairer_wanner: {
      t.name = "hairer_wanner";
      t.stages = 5;
      t.order = 4;
      t.embedded_order = 3;
      t.a = Eigen::MatrixXd::Zero(5, 5);
      t.a.row(0) << 1.0 / 4, 0, 0, 0, 0;
      t.a.row(1) << 1.0 / 2, 1.0 / 4, 0, 0, 0;
      t.a.row(2) << 17.0 / 50, -1.0 / 25, 1.0 / 4, 0, 0;
      t.a.row(3) << 371.0 / 1360, -137.0 / 2720, 15.0 / 544, 1.0 / 4, 0;
      t.a.row(4) << 25.0 / 24, -49.0 / 48, 125.0 / 16, -85.0 / 12, 1.0 / 4;
      t.beta.resize(5);
      t.beta << 1.0 / 4, 3.0 / 4, 11.0 / 20, 1.0 / 2, 1.0;
      t.gamma1 = t.a.row(4).transpose();
      t.gamma2.resize(5);
      t.gamma2 << 59.0 / 48, -17.0 / 96, 225.0 / 32, -85.0 / 12, 0.0;
      t.validate(1e-12);
      break;
    }
    case TableauName::al_rabeh: {
      t.name = "al_rabeh";
      t.stages = 4;
      t.order = 4;
      t.embedded_order = 3;
      t.a = Eigen::MatrixXd::Zero(4, 4);
      t.a.row(0) << 0.4358665, 0, 0, 0;
      t.a.row(1) << -0.4034943, 0.4358665, 0, 0;
      t.a.row(2) << -0.3298751, 0.8616364, 0.4358665, 0;
      t.a.row(3) << 0.5575315, -0.1930865, -0.2361781, 0.4358665;
      t.beta.resize(4);
      t.beta << 0.4358665, 0.0323722, 0.9676278, 0.5641335;
      t.gamma1.resize(4);
      t.gamma1 << 0.3153914, 0.1846086, 0.1846086, 0.3153914;
      t.gamma2.resize(4);
      t.gamma2 << 0.6307827, 0.1413538, 0.2278634, 0.0;
      // coefficients are published to 7 decimals; row sums match beta only to
      // that precision
      t.validate(5e-7);
      break;
    }
    case TableauName::cash: {
      t.name = "cash";
      t.stages = 3;
      t.order = 3;
      t.embedded_order = 2;
      t.a = Eigen::MatrixXd::Zero(3, 3);
      t.a.row(0) << 0.435866521508, 0, 0;
      t.a.row(1) << 0.2820667320, 0.435866521508, 0;
      t.a.row(2) << 1.208496649, -0.6443632015, 0.435866521508;
      t.beta.resize(3);
      t.beta << 0.435866521508, 0.717933260755, 1.0;
      t.gamma1 = t.a.row(2).transpose();
      t.gamma2.resize(3);
      t.gamma2 << 0.77263013745746, 0.22736986254254, 0.0;
      t.validate(5e-7);
      break;
    }
  }
  return t;
}

std::array<double, 4> order_condition_violations(const ButcherTableau& t,
                                                 const Eigen::VectorXd& b) {
  const auto& beta = t.beta;
  const Eigen::VectorXd beta2 = beta.array().square();
  const Eigen::VectorXd beta3 = beta.array().cube();
  const Eigen::VectorXd abeta = t.a * beta;

  std::array<double, 4> v{};
  v[0] = std::abs(b.sum() - 1.0);
  v[1] = std::abs(b.dot(beta) - 0.5);
  v[2] = std::max(std::abs(b.dot(beta2) - 1.0 / 3), std::abs(b.dot(abeta) - 1.0 / 6));
  v[3] = std::max({std::abs(b.dot(beta3) - 0.25),
                   std::abs(b.dot(beta.cwiseProduct(abeta).eval()) - 1.0 / 8),
                   std::abs(b.dot((t.a * beta2).eval()) - 1.0 / 12),
                   std::abs(b.dot((t.a * abeta).eval()) - 1.0 / 24)});
  return v;
}

OrderReport verify_order_conditions(const ButcherTableau& t, int up_to_order, double tol) {
  if (up_to_order < 1 || up_to_order > 4)
    throw std::invalid_argument("verify_order_conditions: supported orders are 1..4");
  OrderReport rep;
  rep.tolerance = tol;
  rep.gamma1_violations = order_condition_violations(t, t.gamma1);
  rep.gamma2_violations = order_condition_violations(t, t.gamma2);
  auto achieved = [&](const std::array<double, 4>& v) {
    int order = 0;
    for (int o = 1; o <= up_to_order; ++o) {
      if (v[o - 1] > tol) break;
      order = o;
    }
    return order;
  };
  rep.gamma1_order = achieved(rep.gamma1_violations);
  rep.gamma2_order = achieved(rep.gamma2_violations);
  return rep;
}

} // namespace hdgflow
