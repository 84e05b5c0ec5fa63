#include <doctest.h>

#include "hdgflow/errors.hpp"
#include "hdgflow/newton.hpp"
#include "hdgflow/solvers.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <set>

using namespace hdgflow;

namespace {

BlockCsr random_block_diag_dominant(int nb, int bs, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  std::uniform_int_distribution<int> pick(0, nb - 1);

  std::vector<std::vector<int>> cols(nb);
  for (int i = 0; i < nb; ++i) {
    std::set<int> s{i};
    while (static_cast<int>(s.size()) < std::min(4, nb)) s.insert(pick(rng));
    cols[i].assign(s.begin(), s.end());
  }
  BlockCsr a = make_block_csr(bs, cols);
  for (int i = 0; i < nb; ++i) {
    double offdiag = 0;
    for (int idx = a.row_ptr[i]; idx < a.row_ptr[i + 1]; ++idx) {
      for (int r = 0; r < bs; ++r)
        for (int c = 0; c < bs; ++c) a.blocks[idx](r, c) = 0.2 * dist(rng);
      if (a.col_idx[idx] != i) offdiag += a.blocks[idx].cwiseAbs().maxCoeff();
    }
    a.blocks[a.find(i, i)].diagonal().array() += 2.0 + offdiag * bs;
  }
  return a;
}

} // namespace

TEST_CASE("dense_lu_solve basics") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
  Eigen::VectorXd b(4);
  b << 1, -2, 3, 0.5;
  CHECK((dense_lu_solve(eye, b) - b).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 3;
  Eigen::VectorXd rhs(2);
  rhs << 3, 4;
  const Eigen::VectorXd x = dense_lu_solve(a, rhs);
  CHECK(x(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x(1) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937 rng(1);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd r(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) r(i, j) = dist(rng) + (i == j ? 8.0 : 0.0);
  Eigen::VectorXd rb(50);
  for (int i = 0; i < 50; ++i) rb(i) = dist(rng);
  const Eigen::VectorXd rx = dense_lu_solve(r, rb);
  CHECK((r * rx - rb).norm() / rb.norm() < 1e-12);

  Eigen::MatrixXd sing = Eigen::MatrixXd::Zero(3, 3);
  sing(0, 0) = 1;
  CHECK_THROWS_AS(dense_lu_solve(sing, Eigen::VectorXd::Zero(3)), solver_error);
  CHECK_THROWS_AS(dense_lu_solve(Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("gmres: identity and diagonal systems") {
  LinearConfig cfg;
  cfg.rel_tol = 1e-4;

  std::vector<std::vector<int>> cols(6);
  for (int i = 0; i < 6; ++i) cols[i] = {i};
  BlockCsr eye = make_block_csr(2, cols);
  for (int i = 0; i < 6; ++i) eye.blocks[i].setIdentity();
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(12, 1, 12);
  Eigen::VectorXd x;
  const GmresResult res = gmres_solve(eye, b, x, cfg, nullptr);
  CHECK(res.iterations <= 1);
  CHECK((x - b).cwiseAbs().maxCoeff() < 1e-12);

  BlockCsr diag = make_block_csr(1, [] {
    std::vector<std::vector<int>> c(20);
    for (int i = 0; i < 20; ++i) c[i] = {i};
    return c;
  }());
  for (int i = 0; i < 20; ++i) diag.blocks[i](0, 0) = i + 1.0;
  Eigen::VectorXd db = Eigen::VectorXd::Ones(20);
  Eigen::VectorXd dx;
  const GmresResult dres = gmres_solve(diag, db, dx, cfg, nullptr);
  CHECK(dres.iterations <= 20);
  CHECK((diag.multiply(dx) - db).norm() / db.norm() <= 1e-4);
}

TEST_CASE("gmres+ilu0 matches a dense solve on a random sparse system") {
  const BlockCsr a = random_block_diag_dominant(50, 4, 99); // 200 unknowns
  std::mt19937 rng(100);
  std::normal_distribution<double> dist;
  Eigen::VectorXd b(a.rows());
  for (int i = 0; i < b.size(); ++i) b(i) = dist(rng);

  const Eigen::VectorXd x_dense = dense_lu_solve(a.to_dense(), b);

  LinearConfig cfg;
  cfg.rel_tol = 1e-4;
  BlockIlu0 ilu;
  ilu.factorize(a);
  Eigen::VectorXd x;
  const GmresResult res = gmres_solve(a, b, x, cfg, &ilu, nullptr);
  CHECK(res.rel_residual <= 1e-4);
  CHECK((x - x_dense).norm() / x_dense.norm() < 1e-3);
}

TEST_CASE("ilu0 is exact for block-triangular matrices") {
  // lower block-triangular: ILU(0) reproduces the matrix, so preconditioned
  // GMRES converges in a single iteration
  std::vector<std::vector<int>> cols = {{0}, {0, 1}, {1, 2}, {0, 3}};
  BlockCsr a = make_block_csr(3, cols);
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  for (auto& blk : a.blocks)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) blk(r, c) = dist(rng);
  for (int i = 0; i < 4; ++i) a.blocks[a.find(i, i)].diagonal().array() += 4.0;

  BlockIlu0 ilu;
  ilu.factorize(a);
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(12, -1, 2);
  Eigen::VectorXd z;
  ilu.apply(b, z);
  CHECK((a.multiply(z) - b).norm() / b.norm() < 1e-12);

  LinearConfig cfg;
  cfg.rel_tol = 1e-10;
  Eigen::VectorXd x;
  const GmresResult res = gmres_solve(a, b, x, cfg, &ilu, nullptr);
  CHECK(res.iterations == 1);
}

TEST_CASE("ilu0 reports zero pivots, gmres reports stagnation") {
  std::vector<std::vector<int>> cols = {{0}, {1}};
  BlockCsr a = make_block_csr(2, cols);
  a.blocks[0].setIdentity();
  a.blocks[1].setZero(); // singular pivot
  BlockIlu0 ilu;
  CHECK_THROWS_AS(ilu.factorize(a), solver_error);

  a.blocks[1].setIdentity();
  a.blocks[1] *= 1e-18;
  LinearConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.max_iter = 3;
  Eigen::VectorXd b = Eigen::VectorXd::Ones(4);
  Eigen::VectorXd x;
  CHECK_THROWS_AS(gmres_solve(a, b, x, cfg, nullptr), solver_error);
}

namespace {

// scalar problems driven through the same newton_solve used by the stage solver
struct ScalarProblem {
  std::function<double(double)> f, df;
  double residual_norm(const double& x) const { return std::abs(f(x)); }
  bool compute_update(const double& x, double& dx, SolveStats&) const {
    dx = -f(x) / df(x);
    return true;
  }
  void apply(double& x, double step, const double& dx) const { x += step * dx; }
};

struct LinearSystemProblem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  double residual_norm(const Eigen::VectorXd& x) const { return (a * x - b).norm(); }
  bool compute_update(const Eigen::VectorXd& x, Eigen::VectorXd& dx, SolveStats&) const {
    dx = dense_lu_solve(a, b - a * x);
    return true;
  }
  void apply(Eigen::VectorXd& x, double step, const Eigen::VectorXd& dx) const {
    x += step * dx;
  }
};

} // namespace

TEST_CASE("newton: linear system converges in one iteration") {
  std::mt19937 rng(13);
  std::normal_distribution<double> dist;
  LinearSystemProblem prob;
  prob.a.resize(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) prob.a(i, j) = dist(rng) + (i == j ? 5.0 : 0.0);
  prob.b = Eigen::VectorXd::Ones(8);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(8);
  NewtonConfig cfg;
  cfg.tol = 1e-12;
  const SolveStats stats = newton_solve(prob, x, cfg);
  CHECK(stats.converged);
  CHECK(stats.newton_iterations == 1);
  CHECK((prob.a * x - prob.b).norm() < 1e-12);
}

TEST_CASE("newton: x^2 - 4 from x0 = 3") {
  ScalarProblem prob;
  prob.f = [](double x) { return x * x - 4.0; };
  prob.df = [](double x) { return 2.0 * x; };
  double x = 3.0;
  NewtonConfig cfg;
  cfg.tol = 1e-10; // on |f|; implies |x - 2| well below 1e-10 too
  const SolveStats stats = newton_solve(prob, x, cfg);
  CHECK(stats.converged);
  CHECK(stats.newton_iterations <= 7);
  CHECK(std::abs(x - 2.0) < 1e-10);
}

TEST_CASE("newton: quadratic convergence tail") {
  ScalarProblem prob;
  prob.f = [](double x) { return std::sin(x) - 0.4; };
  prob.df = [](double x) { return std::cos(x); };
  double x = 1.2;
  NewtonConfig cfg;
  cfg.tol = 1e-15;
  cfg.max_iter = 50;
  // track errors manually
  const double root = std::asin(0.4);
  std::vector<double> errs;
  for (int it = 0; it < 6; ++it) {
    errs.push_back(std::abs(x - root));
    double dx;
    SolveStats s;
    prob.compute_update(x, dx, s);
    x += dx;
    if (std::abs(x - root) < 1e-14) break;
  }
  for (size_t i = 1; i + 1 < errs.size(); ++i)
    CHECK(errs[i + 1] <= 5.0 * errs[i] * errs[i]); // e_{k+1} / e_k^2 bounded
}

TEST_CASE("newton: damping never accepts an increased residual") {
  // residual with a far-overshooting Newton direction at x0 forces backtracking
  ScalarProblem prob;
  prob.f = [](double x) { return std::atan(x); };
  prob.df = [](double x) { return 1.0 / (1.0 + x * x); };
  double x = 3.0; // full Newton step overshoots and increases |atan|
  NewtonConfig cfg;
  cfg.tol = 1e-12;
  cfg.max_iter = 50;
  double prev = prob.residual_norm(x);
  for (int it = 0; it < 8 && prev > cfg.tol; ++it) {
    const SolveStats stats = newton_solve(prob, x, NewtonConfig{cfg.tol, 1, cfg.min_step});
    (void)stats;
    const double now = prob.residual_norm(x);
    CHECK(now < prev);
    prev = now;
  }
}

TEST_CASE("newton reports non-convergence") {
  ScalarProblem prob;
  prob.f = [](double x) { return x * x + 1.0; }; // no real root
  prob.df = [](double x) { return 2.0 * x; };
  double x = 0.7;
  NewtonConfig cfg;
  cfg.tol = 1e-10;
  cfg.max_iter = 10;
  const SolveStats stats = newton_solve(prob, x, cfg);
  CHECK_FALSE(stats.converged);
}
