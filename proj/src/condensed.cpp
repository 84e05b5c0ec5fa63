#include "hdgflow/errors.hpp"
#include "hdgflow/hdg.hpp"

#include <algorithm>
#include <cmath>

// Jacobian assembly and static condensation of the stage system onto the
// trace unknowns. Local per-element blocks are eliminated with dense LU; the
// remaining edge-coupled Schur complement is handed to the sparse solver.

namespace hdgflow {

namespace {

Eigen::PartialPivLU<Eigen::MatrixXd> factor_local(const Eigen::MatrixXd& a, int element) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const auto d = lu.matrixLU().diagonal().cwiseAbs();
  if (!(d.minCoeff() > d.maxCoeff() * 1e-14) || !(d.maxCoeff() > 0))
    throw solver_error("condensation: singular local block on element " + std::to_string(element));
  return lu;
}

} // namespace

struct HdgAssembler::ElementBlocks {
  Eigen::MatrixXd a; // nloc x nloc, (sigma,w) rows/cols
  Eigen::MatrixXd b; // nloc x 3*bs, coupling to the three edge traces
  Eigen::MatrixXd c; // 3*bs x nloc, trace rows vs element unknowns
  Eigen::VectorXd f; // nloc residual
};

void HdgAssembler::element_system(const StateTriple& state, const StageShift& shift, int k,
                                  ElementBlocks& blocks) {
  const auto& g = disc_.geom(k);
  const double dj = g.det_jac;
  const bool viscous = model_.has_viscous();
  const bool unsteady = shift.w_ref != nullptr;
  const double wscale = unsteady ? shift.a_dt : 1.0;

  auto wk = state.w_elem(k);
  auto sk = state.sigma_elem(k);

  blocks.a.setZero(nloc_, nloc_);
  blocks.b.setZero(nloc_, 3 * bs_);
  blocks.c.setZero(3 * bs_, nloc_);
  blocks.f.resize(nloc_);

  auto is = [this](int c, int d) { return (c * 2 + d) * np_; };
  auto iw = [this](int c) { return 2 * m_ * np_ + c * np_; };

  // residual (shares the weak-form code path with the cheap evaluations)
  element_residual(state, shift, k, blocks.f.head(2 * m_ * np_), blocks.f.tail(m_ * np_));

  // --- volume terms -----------------------------------------------------
  Eigen::MatrixXd od0 = Eigen::MatrixXd::Zero(np_, np_); // sum_q dj w_q G0 phi^T
  Eigen::MatrixXd od1 = Eigen::MatrixXd::Zero(np_, np_);
  Eigen::MatrixXd o0(np_, np_), o1(np_, np_);

  for (int q = 0; q < nq_; ++q) {
    const double wq = dj * disc_.volume_rule().weights[q];
    const Eigen::Vector2d x = disc_.volume_points(k).col(q);
    for (int c = 0; c < m_; ++c) {
      wq_(c) = wk.segment(c * np_, np_).dot(disc_.phi().col(q));
      if (viscous)
        for (int d = 0; d < 2; ++d)
          sigq_(c, d) = sk.segment((c * 2 + d) * np_, np_).dot(disc_.phi().col(q));
    }
    o0.noalias() = wq * disc_.grad_phys(k, 0).col(q) * disc_.phi().col(q).transpose();
    o1.noalias() = wq * disc_.grad_phys(k, 1).col(q) * disc_.phi().col(q).transpose();
    od0 += o0;
    od1 += o1;

    model_.flux_jacobian(x, wq_, a0_, a1_);
    for (int c = 0; c < m_; ++c)
      for (int cc = 0; cc < m_; ++cc) {
        if (a0_(c, cc) != 0)
          blocks.a.block(iw(c), iw(cc), np_, np_).noalias() -= (wscale * a0_(c, cc)) * o0;
        if (a1_(c, cc) != 0)
          blocks.a.block(iw(c), iw(cc), np_, np_).noalias() -= (wscale * a1_(c, cc)) * o1;
      }
    if (viscous) {
      model_.viscous_jacobian_sigma(wq_, dsig_);
      for (int c = 0; c < m_; ++c)
        for (int cc = 0; cc < m_; ++cc)
          for (int dd = 0; dd < 2; ++dd) {
            const int col = cc * 2 + dd;
            if (dsig_(c * 2 + 0, col) != 0)
              blocks.a.block(iw(c), is(cc, dd), np_, np_).noalias() +=
                  (wscale * dsig_(c * 2 + 0, col)) * o0;
            if (dsig_(c * 2 + 1, col) != 0)
              blocks.a.block(iw(c), is(cc, dd), np_, np_).noalias() +=
                  (wscale * dsig_(c * 2 + 1, col)) * o1;
          }
      Eigen::MatrixXd d0(m_, m_), d1(m_, m_);
      model_.viscous_jacobian_w(wq_, sigq_, d0, d1);
      for (int c = 0; c < m_; ++c)
        for (int cc = 0; cc < m_; ++cc) {
          if (d0(c, cc) != 0)
            blocks.a.block(iw(c), iw(cc), np_, np_).noalias() += (wscale * d0(c, cc)) * o0;
          if (d1(c, cc) != 0)
            blocks.a.block(iw(c), iw(cc), np_, np_).noalias() += (wscale * d1(c, cc)) * o1;
        }
    }
  }

  for (int c = 0; c < m_; ++c) {
    for (int d = 0; d < 2; ++d) {
      blocks.a.block(is(c, d), is(c, d), np_, np_).diagonal().array() += dj;
      blocks.a.block(is(c, d), iw(c), np_, np_) = -(d == 0 ? od0 : od1).transpose();
    }
    if (unsteady) blocks.a.block(iw(c), iw(c), np_, np_).diagonal().array() += dj;
  }

  // --- edge terms ---------------------------------------------------------
  EdgeSideEval ev;
  Eigen::MatrixXd t0(np_, np_), t1(np_, np_), u0(np_, ne_);
  for (int loc = 0; loc < 3; ++loc) {
    const int e = disc_.skeleton().element_edges[k][loc];
    const auto& ed = disc_.skeleton().edges[e];
    const int side = (ed.left == k) ? 0 : 1;
    eval_edge_side(state, shift.time, e, side, ev, true);
    const auto& tphi = disc_.trace_phi(e, side);

    t0.setZero();
    t1.setZero();
    u0.setZero();
    for (int r = 0; r < nqe_; ++r) {
      const double wr = ev.len * disc_.edge_rule().weights[r];
      t0.noalias() += wr * tphi.col(r) * tphi.col(r).transpose();
      t1.noalias() += (wr * ev.pen(r)) * tphi.col(r) * tphi.col(r).transpose();
      u0.noalias() += wr * tphi.col(r) * disc_.edge_phi().col(r).transpose();
    }

    for (int c = 0; c < m_; ++c) {
      for (int d = 0; d < 2; ++d) {
        blocks.a.block(is(c, d), iw(c), np_, np_).noalias() += ev.n(d) * t0;
        blocks.b.block(is(c, d), loc * bs_ + c * ne_, np_, ne_).noalias() -= ev.n(d) * u0;
      }
      blocks.a.block(iw(c), iw(c), np_, np_).noalias() += wscale * t1;
    }

    for (int r = 0; r < nqe_; ++r) {
      const double wr = ev.len * disc_.edge_rule().weights[r];
      for (int c = 0; c < m_; ++c)
        for (int cc = 0; cc < m_; ++cc) {
          double coef = ev.an[r](c, cc);
          if (viscous) coef -= ev.bn[r](c, cc);
          if (c == cc) coef -= ev.pen(r);
          if (coef != 0)
            blocks.b.block(iw(c), loc * bs_ + cc * ne_, np_, ne_).noalias() +=
                (wscale * wr * coef) * tphi.col(r) * disc_.edge_phi().col(r).transpose();
        }
      if (viscous)
        for (int c = 0; c < m_; ++c)
          for (int cc = 0; cc < m_; ++cc)
            for (int dd = 0; dd < 2; ++dd) {
              const double coef = ev.dn[r](c, cc * 2 + dd);
              if (coef != 0)
                blocks.a.block(iw(c), is(cc, dd), np_, np_).noalias() -=
                    (wscale * wr * coef) * tphi.col(r) * tphi.col(r).transpose();
            }
    }

    // trace-equation rows of this edge vs the element unknowns
    if (ed.interior()) {
      for (int r = 0; r < nqe_; ++r) {
        const double wr = ev.len * disc_.edge_rule().weights[r];
        for (int c = 0; c < m_; ++c) {
          blocks.c.block(loc * bs_ + c * ne_, iw(c), ne_, np_).noalias() +=
              (wr * ev.pen(r)) * disc_.edge_phi().col(r) * tphi.col(r).transpose();
          if (viscous)
            for (int cc = 0; cc < m_; ++cc)
              for (int dd = 0; dd < 2; ++dd) {
                const double coef = ev.dn[r](c, cc * 2 + dd);
                if (coef != 0)
                  blocks.c.block(loc * bs_ + c * ne_, is(cc, dd), ne_, np_).noalias() -=
                      (wr * coef) * disc_.edge_phi().col(r) * tphi.col(r).transpose();
              }
        }
      }
    } else {
      const Eigen::Vector2d n(ed.normal[0], ed.normal[1]);
      const auto& pts = disc_.edge_points(e);
      const Eigen::Vector2d mid = 0.5 * (pts.col(0) + pts.col(nqe_ - 1));
      if (model_.boundary(mid, n, shift.time).kind == BoundaryKind::extrapolate)
        for (int c = 0; c < m_; ++c)
          blocks.c.block(loc * bs_ + c * ne_, iw(c), ne_, np_).noalias() -= u0.transpose();
    }
  }
}

void HdgAssembler::trace_diag_block(const StateTriple& state, const StageShift& shift, int e,
                                    Eigen::Ref<Eigen::MatrixXd> d_block,
                                    Eigen::Ref<Eigen::VectorXd> r_lambda_e) {
  const auto& ed = disc_.skeleton().edges[e];
  d_block.setZero();
  edge_rows_residual(state, shift, e, r_lambda_e);

  EdgeSideEval ev;
  if (ed.interior()) {
    for (int side = 0; side < 2; ++side) {
      eval_edge_side(state, shift.time, e, side, ev, true);
      for (int r = 0; r < nqe_; ++r) {
        const double wr = ev.len * disc_.edge_rule().weights[r];
        for (int c = 0; c < m_; ++c)
          for (int cc = 0; cc < m_; ++cc) {
            double coef = ev.an[r](c, cc);
            if (model_.has_viscous()) coef -= ev.bn[r](c, cc);
            if (c == cc) coef -= ev.pen(r);
            if (coef != 0)
              d_block.block(c * ne_, cc * ne_, ne_, ne_).noalias() +=
                  (wr * coef) * disc_.edge_phi().col(r) * disc_.edge_phi().col(r).transpose();
          }
      }
    }
  } else {
    // boundary rows pin lambda; edge basis is orthonormal so this is len * I,
    // assembled by quadrature for uniformity
    for (int r = 0; r < nqe_; ++r) {
      const double wr = ed.length * disc_.edge_rule().weights[r];
      for (int c = 0; c < m_; ++c)
        d_block.block(c * ne_, c * ne_, ne_, ne_).noalias() +=
            wr * disc_.edge_phi().col(r) * disc_.edge_phi().col(r).transpose();
    }
  }
}

CondensedSystem HdgAssembler::assemble_condensed(const StateTriple& state,
                                                 const StageShift& shift) {
  if (shift.w_ref != nullptr && !(shift.a_dt > 0))
    throw std::invalid_argument("assemble_condensed: unsteady stage requires a_dt > 0");

  const auto& skel = disc_.skeleton();
  if (csr_template_.nb == 0) {
    std::vector<std::vector<int>> cols(skel.num_edges());
    for (int e = 0; e < skel.num_edges(); ++e) {
      std::vector<int> c{e};
      for (int k : {skel.edges[e].left, skel.edges[e].right})
        if (k >= 0)
          for (int ee : skel.element_edges[k]) c.push_back(ee);
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      cols[e] = std::move(c);
    }
    csr_template_ = make_block_csr(bs_, cols);
  }

  CondensedSystem sys;
  sys.k_lambda = csr_template_;
  sys.k_lambda.set_zero();
  sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(skel.num_edges()) * bs_);
  sys.local_e.resize(disc_.num_elements());
  sys.local_h.resize(disc_.num_elements());

  double norm2 = 0;
  Eigen::MatrixXd d_block(bs_, bs_);
  Eigen::VectorXd r_lam(bs_);
  for (int e = 0; e < skel.num_edges(); ++e) {
    trace_diag_block(state, shift, e, d_block, r_lam);
    sys.k_lambda.blocks[sys.k_lambda.find(e, e)] += d_block;
    sys.rhs.segment(static_cast<Eigen::Index>(e) * bs_, bs_) = -r_lam;
    norm2 += r_lam.squaredNorm();
  }
  sys.lambda_residual_norm = std::sqrt(norm2);

  ElementBlocks blocks;
  for (int k = 0; k < disc_.num_elements(); ++k) {
    element_system(state, shift, k, blocks);
    const auto lu = factor_local(blocks.a, k);
    Eigen::MatrixXd e_k = lu.solve(blocks.b);
    Eigen::VectorXd h_k = lu.solve(blocks.f);
    const Eigen::MatrixXd schur = blocks.c * e_k;
    const Eigen::VectorXd ch = blocks.c * h_k;
    const auto& edges = skel.element_edges[k];
    for (int li = 0; li < 3; ++li) {
      for (int lj = 0; lj < 3; ++lj)
        sys.k_lambda.blocks[sys.k_lambda.find(edges[li], edges[lj])] -=
            schur.block(li * bs_, lj * bs_, bs_, bs_);
      sys.rhs.segment(static_cast<Eigen::Index>(edges[li]) * bs_, bs_) +=
          ch.segment(li * bs_, bs_);
    }
    sys.local_e[k] = std::move(e_k);
    sys.local_h[k] = std::move(h_k);
  }
  return sys;
}

void HdgAssembler::back_substitute(const CondensedSystem& sys, const Eigen::VectorXd& dlambda,
                                   Eigen::VectorXd& dsigma, Eigen::VectorXd& dw) const {
  dsigma.resize(static_cast<Eigen::Index>(disc_.num_elements()) * 2 * m_ * np_);
  dw.resize(static_cast<Eigen::Index>(disc_.num_elements()) * m_ * np_);
  Eigen::VectorXd dl(3 * bs_), du(nloc_);
  for (int k = 0; k < disc_.num_elements(); ++k) {
    const auto& edges = disc_.skeleton().element_edges[k];
    for (int li = 0; li < 3; ++li)
      dl.segment(li * bs_, bs_) = dlambda.segment(static_cast<Eigen::Index>(edges[li]) * bs_, bs_);
    du = -sys.local_h[k];
    du.noalias() -= sys.local_e[k] * dl;
    dsigma.segment(static_cast<Eigen::Index>(k) * 2 * m_ * np_, 2 * m_ * np_) =
        du.head(2 * m_ * np_);
    dw.segment(static_cast<Eigen::Index>(k) * m_ * np_, m_ * np_) = du.tail(m_ * np_);
  }
}

void HdgAssembler::assemble_monolithic(const StateTriple& state, const StageShift& shift,
                                       Eigen::MatrixXd& jac, Eigen::VectorXd& res) {
  const int nelem = disc_.num_elements();
  const int nsig = nelem * 2 * m_ * np_;
  const int nw = nelem * m_ * np_;
  const int nlam = disc_.num_edges() * bs_;
  const int ntot = nsig + nw + nlam;
  jac.setZero(ntot, ntot);
  res.setZero(ntot);

  ElementBlocks blocks;
  for (int k = 0; k < nelem; ++k) {
    element_system(state, shift, k, blocks);
    const int so = k * 2 * m_ * np_;
    const int wo = nsig + k * m_ * np_;
    const int ns = 2 * m_ * np_, nwl = m_ * np_;
    jac.block(so, so, ns, ns) = blocks.a.topLeftCorner(ns, ns);
    jac.block(so, wo, ns, nwl) = blocks.a.topRightCorner(ns, nwl);
    jac.block(wo, so, nwl, ns) = blocks.a.bottomLeftCorner(nwl, ns);
    jac.block(wo, wo, nwl, nwl) = blocks.a.bottomRightCorner(nwl, nwl);
    res.segment(so, ns) = blocks.f.head(ns);
    res.segment(wo, nwl) = blocks.f.tail(nwl);
    const auto& edges = disc_.skeleton().element_edges[k];
    for (int li = 0; li < 3; ++li) {
      const int lo = nsig + nw + edges[li] * bs_;
      jac.block(so, lo, ns, bs_) += blocks.b.block(0, li * bs_, ns, bs_);
      jac.block(wo, lo, nwl, bs_) += blocks.b.block(ns, li * bs_, nwl, bs_);
      jac.block(lo, so, bs_, ns) += blocks.c.block(li * bs_, 0, bs_, ns);
      jac.block(lo, wo, bs_, nwl) += blocks.c.block(li * bs_, ns, bs_, nwl);
    }
  }

  Eigen::MatrixXd d_block(bs_, bs_);
  Eigen::VectorXd r_lam(bs_);
  for (int e = 0; e < disc_.num_edges(); ++e) {
    trace_diag_block(state, shift, e, d_block, r_lam);
    const int lo = nsig + nw + e * bs_;
    jac.block(lo, lo, bs_, bs_) += d_block;
    res.segment(lo, bs_) = r_lam;
  }
}

} // namespace hdgflow
