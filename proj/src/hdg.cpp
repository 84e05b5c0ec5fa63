#include "hdgflow/hdg.hpp"
#include "hdgflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hdgflow {

void numerical_flux(const FluxModel& model, const Eigen::Vector2d& x,
                    const Eigen::VectorXd& lambda, const Eigen::VectorXd& w_minus,
                    const Eigen::MatrixXd& sigma_minus, const Eigen::Vector2d& n,
                    Eigen::Ref<Eigen::VectorXd> fhat_n, Eigen::Ref<Eigen::VectorXd> fhatv_n) {
  const int m = model.components();
  model.check_admissible(lambda, -1, x);
  Eigen::MatrixXd f(m, 2);
  model.flux(x, lambda, f);
  const double d = model.delta(x, lambda, n);
  fhat_n = f * n - d * (lambda - w_minus);
  if (model.has_viscous()) {
    Eigen::MatrixXd fv(m, 2);
    model.viscous_flux(lambda, sigma_minus, fv);
    const double tau = model.tau(x, lambda, n);
    fhatv_n = fv * n + tau * (lambda - w_minus);
  } else {
    fhatv_n.setZero();
  }
}

ResidualTriple apply_time_operator(const Discretization& disc, const Eigen::VectorXd& dw) {
  const int m = disc.components(), np = disc.np();
  ResidualTriple r;
  r.r_sigma = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.num_elements()) * 2 * m * np);
  r.r_lambda = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.num_edges()) * m * disc.ne());
  r.r_w.resize(dw.size());
  for (int k = 0; k < disc.num_elements(); ++k)
    r.r_w.segment(static_cast<Eigen::Index>(k) * m * np, m * np) =
        disc.geom(k).det_jac * dw.segment(static_cast<Eigen::Index>(k) * m * np, m * np);
  return r;
}

Eigen::VectorXd lift_sigma(const Discretization& disc, const Eigen::VectorXd& w,
                           const Eigen::VectorXd& lambda) {
  const int m = disc.components(), np = disc.np(), ne = disc.ne();
  const int nq = disc.nq(), nqe = disc.nqe();
  Eigen::VectorXd sigma =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.num_elements()) * 2 * m * np);

  for (int k = 0; k < disc.num_elements(); ++k) {
    const double dj = disc.geom(k).det_jac;
    auto wk = w.segment(static_cast<Eigen::Index>(k) * m * np, m * np);
    auto sk = sigma.segment(static_cast<Eigen::Index>(k) * 2 * m * np, 2 * m * np);
    // volume part: (grad w, phi)
    for (int q = 0; q < nq; ++q) {
      const double wq = dj * disc.volume_rule().weights[q];
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < 2; ++d) {
          const double dw = wk.segment(c * np, np).dot(disc.grad_phys(k, d).col(q));
          sk.segment((c * 2 + d) * np, np) += (wq * dw) * disc.phi().col(q);
        }
    }
    // trace lift: <lambda - w^-, phi n_d>
    for (int loc = 0; loc < 3; ++loc) {
      const int e = disc.skeleton().element_edges[k][loc];
      const auto& ed = disc.skeleton().edges[e];
      const int side = (ed.left == k) ? 0 : 1;
      const double sgn = (side == 0) ? 1.0 : -1.0;
      const Eigen::Vector2d n(sgn * ed.normal[0], sgn * ed.normal[1]);
      const auto& tphi = disc.trace_phi(e, side);
      auto lam = lambda.segment(static_cast<Eigen::Index>(e) * m * ne, m * ne);
      for (int r = 0; r < nqe; ++r) {
        const double wr = ed.length * disc.edge_rule().weights[r];
        for (int c = 0; c < m; ++c) {
          const double jump = lam.segment(c * ne, ne).dot(disc.edge_phi().col(r)) -
                              wk.segment(c * np, np).dot(tphi.col(r));
          for (int d = 0; d < 2; ++d)
            sk.segment((c * 2 + d) * np, np) += (wr * jump * n(d)) * tphi.col(r);
        }
      }
    }
    sk /= dj; // orthonormal basis: element mass is det_jac * I
  }
  return sigma;
}

// ---------------------------------------------------------------------------

HdgAssembler::HdgAssembler(const Discretization& disc, const FluxModel& model)
    : disc_(disc), model_(model) {
  m_ = disc.components();
  np_ = disc.np();
  ne_ = disc.ne();
  nq_ = disc.nq();
  nqe_ = disc.nqe();
  nloc_ = 3 * m_ * np_;
  bs_ = m_ * ne_;
  if (model.components() != m_)
    throw std::invalid_argument("HdgAssembler: model/discretization component mismatch");

  wq_.resize(m_);
  gq_.resize(m_);
  lamq_.resize(m_);
  wminus_.resize(m_);
  fhat_.resize(m_);
  fq_.resize(m_, 2);
  fvq_.resize(m_, 2);
  sigq_.resize(m_, 2);
  a0_.resize(m_, m_);
  a1_.resize(m_, m_);
  dsig_.resize(2 * m_, 2 * m_);
  an_.resize(m_, m_);
}

void HdgAssembler::eval_edge_side(const StateTriple& state, double t, int e, int side,
                                  EdgeSideEval& ev, bool with_jacobian) {
  const auto& ed = disc_.skeleton().edges[e];
  ev.elem = (side == 0) ? ed.left : ed.right;
  const double sgn = (side == 0) ? 1.0 : -1.0;
  ev.n = Eigen::Vector2d(sgn * ed.normal[0], sgn * ed.normal[1]);
  ev.len = ed.length;
  const auto& tphi = disc_.trace_phi(e, side);
  const auto& pts = disc_.edge_points(e);

  ev.lam.resize(m_, nqe_);
  ev.wm.resize(m_, nqe_);
  ev.sig.resize(2 * m_, nqe_);
  ev.flux_n.resize(m_, nqe_);
  ev.pen.resize(nqe_);
  if (with_jacobian) {
    ev.an.assign(nqe_, Eigen::MatrixXd(m_, m_));
    if (model_.has_viscous()) {
      ev.dn.assign(nqe_, Eigen::MatrixXd(m_, 2 * m_));
      ev.bn.assign(nqe_, Eigen::MatrixXd(m_, m_));
    }
  }

  auto lam = state.lambda_edge(e);
  auto wk = state.w_elem(ev.elem);
  auto sk = state.sigma_elem(ev.elem);
  const bool viscous = model_.has_viscous();

  for (int r = 0; r < nqe_; ++r) {
    const Eigen::Vector2d x = pts.col(r);
    for (int c = 0; c < m_; ++c) {
      lamq_(c) = lam.segment(c * ne_, ne_).dot(disc_.edge_phi().col(r));
      wminus_(c) = wk.segment(c * np_, np_).dot(tphi.col(r));
      for (int d = 0; d < 2; ++d)
        sigq_(c, d) = sk.segment((c * 2 + d) * np_, np_).dot(tphi.col(r));
    }
    ev.lam.col(r) = lamq_;
    ev.wm.col(r) = wminus_;
    for (int c = 0; c < m_; ++c)
      for (int d = 0; d < 2; ++d) ev.sig(c * 2 + d, r) = sigq_(c, d);

    model_.check_admissible(lamq_, e, x);
    model_.flux(x, lamq_, fq_);
    const double delta = model_.delta(x, lamq_, ev.n);
    const double tau = model_.tau(x, lamq_, ev.n);
    ev.pen(r) = delta + tau;
    Eigen::VectorXd total = fq_ * ev.n;
    if (viscous) {
      model_.viscous_flux(lamq_, sigq_, fvq_);
      total -= fvq_ * ev.n;
    }
    total -= ev.pen(r) * (lamq_ - wminus_);
    ev.flux_n.col(r) = total;

    if (with_jacobian) {
      model_.flux_jacobian(x, lamq_, a0_, a1_);
      ev.an[r] = a0_ * ev.n(0) + a1_ * ev.n(1);
      if (viscous) {
        model_.viscous_jacobian_sigma(lamq_, dsig_);
        for (int c = 0; c < m_; ++c)
          for (int cd = 0; cd < 2 * m_; ++cd)
            ev.dn[r](c, cd) = dsig_(c * 2 + 0, cd) * ev.n(0) + dsig_(c * 2 + 1, cd) * ev.n(1);
        Eigen::MatrixXd d0(m_, m_), d1(m_, m_);
        model_.viscous_jacobian_w(lamq_, sigq_, d0, d1);
        ev.bn[r] = d0 * ev.n(0) + d1 * ev.n(1);
      }
    }
  }
}

void HdgAssembler::element_residual(const StateTriple& state, const StageShift& shift, int k,
                                    Eigen::Ref<Eigen::VectorXd> r_sigma_k,
                                    Eigen::Ref<Eigen::VectorXd> r_w_k) {
  const auto& g = disc_.geom(k);
  const double dj = g.det_jac;
  auto wk = state.w_elem(k);
  auto sk = state.sigma_elem(k);
  const bool viscous = model_.has_viscous();
  const bool source = model_.has_source();

  r_sigma_k = dj * sk; // gradient-equation mass term
  r_w_k.setZero();

  for (int q = 0; q < nq_; ++q) {
    const double wq = dj * disc_.volume_rule().weights[q];
    const Eigen::Vector2d x = disc_.volume_points(k).col(q);
    for (int c = 0; c < m_; ++c) {
      wq_(c) = wk.segment(c * np_, np_).dot(disc_.phi().col(q));
      if (viscous)
        for (int d = 0; d < 2; ++d)
          sigq_(c, d) = sk.segment((c * 2 + d) * np_, np_).dot(disc_.phi().col(q));
    }
    model_.check_admissible(wq_, k, x);
    model_.flux(x, wq_, fq_);
    if (viscous) {
      model_.viscous_flux(wq_, sigq_, fvq_);
      fq_ -= fvq_;
    }
    for (int c = 0; c < m_; ++c) {
      // -(f - f_v, grad phi) and the gradient-equation volume term
      r_w_k.segment(c * np_, np_).noalias() -=
          wq * (fq_(c, 0) * disc_.grad_phys(k, 0).col(q) + fq_(c, 1) * disc_.grad_phys(k, 1).col(q));
      for (int d = 0; d < 2; ++d) {
        const double dw = wk.segment(c * np_, np_).dot(disc_.grad_phys(k, d).col(q));
        r_sigma_k.segment((c * 2 + d) * np_, np_).noalias() -= (wq * dw) * disc_.phi().col(q);
      }
    }
    if (source) {
      model_.source(x, shift.time, gq_);
      for (int c = 0; c < m_; ++c)
        r_w_k.segment(c * np_, np_).noalias() -= (wq * gq_(c)) * disc_.phi().col(q);
    }
  }

  EdgeSideEval ev;
  for (int loc = 0; loc < 3; ++loc) {
    const int e = disc_.skeleton().element_edges[k][loc];
    const auto& ed = disc_.skeleton().edges[e];
    const int side = (ed.left == k) ? 0 : 1;
    eval_edge_side(state, shift.time, e, side, ev, false);
    const auto& tphi = disc_.trace_phi(e, side);
    for (int r = 0; r < nqe_; ++r) {
      const double wr = ev.len * disc_.edge_rule().weights[r];
      for (int c = 0; c < m_; ++c) {
        r_w_k.segment(c * np_, np_).noalias() += (wr * ev.flux_n(c, r)) * tphi.col(r);
        const double jump = ev.lam(c, r) - ev.wm(c, r);
        for (int d = 0; d < 2; ++d)
          r_sigma_k.segment((c * 2 + d) * np_, np_).noalias() -=
              (wr * jump * ev.n(d)) * tphi.col(r);
      }
    }
  }

  if (shift.w_ref != nullptr) {
    auto wref = shift.w_ref->segment(static_cast<Eigen::Index>(k) * m_ * np_, m_ * np_);
    r_w_k = dj * (wk - wref) + shift.a_dt * r_w_k;
  }
}

void HdgAssembler::edge_rows_residual(const StateTriple& state, const StageShift& shift, int e,
                                      Eigen::Ref<Eigen::VectorXd> r_lambda_e) {
  const auto& ed = disc_.skeleton().edges[e];
  r_lambda_e.setZero();
  EdgeSideEval ev;
  if (ed.interior()) {
    for (int side = 0; side < 2; ++side) {
      eval_edge_side(state, shift.time, e, side, ev, false);
      for (int r = 0; r < nqe_; ++r) {
        const double wr = ev.len * disc_.edge_rule().weights[r];
        for (int c = 0; c < m_; ++c)
          r_lambda_e.segment(c * ne_, ne_).noalias() +=
              (wr * ev.flux_n(c, r)) * disc_.edge_phi().col(r);
      }
    }
    return;
  }

  // boundary rows: pin lambda to the data (or to the interior trace)
  eval_edge_side(state, shift.time, e, 0, ev, false);
  const Eigen::Vector2d n(ed.normal[0], ed.normal[1]);
  const auto& pts = disc_.edge_points(e);
  const Eigen::Vector2d mid = 0.5 * (pts.col(0) + pts.col(nqe_ - 1));
  const BoundaryKind kind = model_.boundary(mid, n, shift.time).kind;
  for (int r = 0; r < nqe_; ++r) {
    const double wr = ev.len * disc_.edge_rule().weights[r];
    Eigen::VectorXd target(m_);
    if (kind == BoundaryKind::prescribed)
      target = model_.boundary(pts.col(r), n, shift.time).value;
    else
      target = ev.wm.col(r);
    for (int c = 0; c < m_; ++c)
      r_lambda_e.segment(c * ne_, ne_).noalias() +=
          (wr * (ev.lam(c, r) - target(c))) * disc_.edge_phi().col(r);
  }
}

ResidualTriple HdgAssembler::residual(const StateTriple& state, double t) {
  StageShift stationary;
  stationary.time = t;
  return stage_residual(state, stationary);
}

ResidualTriple HdgAssembler::stage_residual(const StateTriple& state, const StageShift& shift) {
  ResidualTriple r;
  r.r_sigma.resize(state.sigma.size());
  r.r_w.resize(state.w.size());
  r.r_lambda.resize(state.lambda.size());
  for (int k = 0; k < disc_.num_elements(); ++k)
    element_residual(state, shift, k, r.r_sigma.segment(static_cast<Eigen::Index>(k) * 2 * m_ * np_, 2 * m_ * np_),
                     r.r_w.segment(static_cast<Eigen::Index>(k) * m_ * np_, m_ * np_));
  for (int e = 0; e < disc_.num_edges(); ++e)
    edge_rows_residual(state, shift, e,
                       r.r_lambda.segment(static_cast<Eigen::Index>(e) * bs_, bs_));
  return r;
}

} // namespace hdgflow
