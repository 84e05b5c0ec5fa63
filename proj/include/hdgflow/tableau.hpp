#ifndef HDGFLOW_TABLEAU_HPP
#define HDGFLOW_TABLEAU_HPP

#include <Eigen/Dense>
#include <array>
#include <string>

namespace hdgflow {

// Embedded singly diagonally implicit Runge-Kutta tableau: lower-triangular A
// with one repeated nonzero diagonal entry, nodes beta, and two weight rows.
// gamma1 is the higher-order (propagated) method, gamma2 the embedded one.
struct ButcherTableau {
  std::string name;
  int stages = 0;
  Eigen::MatrixXd a;
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma1;
  Eigen::VectorXd gamma2;
  int order = 0;
  int embedded_order = 0;

  bool stiffly_accurate() const {
    return (a.row(stages - 1).transpose() - gamma1).cwiseAbs().maxCoeff() < 1e-14;
  }
  // invariant checks; tol covers the printed precision of decimal tableaus
  void validate(double row_sum_tol = 1e-12) const;
};

enum class TableauName { hairer_wanner, al_rabeh, cash };

TableauName tableau_name_from_string(const std::string& s);

ButcherTableau tableau(TableauName name);

// Classical order-condition residuals for one weight row b, evaluated up to
// order 4: returns the maximum violation per order (index 0 = order 1).
std::array<double, 4> order_condition_violations(const ButcherTableau& t,
                                                 const Eigen::VectorXd& b);

struct OrderReport {
  std::array<double, 4> gamma1_violations;
  std::array<double, 4> gamma2_violations;
  int gamma1_order = 0; // largest order with all conditions below tolerance
  int gamma2_order = 0;
  double tolerance = 0;
};

OrderReport verify_order_conditions(const ButcherTableau& t, int up_to_order, double tol);

} // namespace hdgflow

#endif
