#include "fbp/tangent.hpp"

#include <cmath>

namespace fbp {

namespace {

Eigen::VectorXd zero_or(const Eigen::VectorXd& v, int n) {
  if (v.size() == 0) return Eigen::VectorXd::Zero(n);
  if (v.size() != n) throw ConfigError("load vector size does not match the mesh");
  return v;
}

}  // namespace

LinearizedOperator::LinearizedOperator(const StatePair& base, const BulkField& v,
                                       const SolveConfig& cfg)
    : m_(v.mesh), im_(v.mesh.top_interval()), base_(base), cfg_(cfg) {
  weight_ = pair_weight(v, cfg_);
  w_total_ = base_.y.values + v.values;
  const BulkField w_field = BulkField::from_nodal(m_, w_total_, FieldTag::free);

  E_ = extension_matrix(m_);
  P_ = selection_matrix(m_.n_nodes(), unconstrained_nodes(m_, FieldTag::zero_on_boundary));
  K_full_ = assemble_B_Omega(m_, base_.gamma).matrix;
  C_full_ = coupling_matrix(m_, base_.gamma, w_field);
  KG_ = assemble_B_Gamma(im_, cfg_.kappa).matrix;

  B1_ = E_.transpose() * K_full_ * P_;
  C1_ = E_.transpose() * C_full_;
  C2_ = P_.transpose() * C_full_;
  K_int_ = P_.transpose() * K_full_ * P_;

  KG_fac_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
  KG_fac_->compute(KG_);
  K_int_fac_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
  K_int_fac_->compute(K_int_);
  if (KG_fac_->info() != Eigen::Success || K_int_fac_->info() != Eigen::Success)
    throw SolverError("factorization of the linearized blocks failed");
}

std::pair<TangentPair, FixedPointTrace> LinearizedOperator::iterate(
    const Eigen::VectorXd& rhs_interface, const Eigen::VectorXd& rhs_bulk,
    bool transposed) const {
  const int ni = static_cast<int>(rhs_interface.size());
  const int nb = static_cast<int>(rhs_bulk.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(ni);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(nb);

  FixedPointTrace trace;
  for (int it = 1; it <= cfg_.fp_max_iter; ++it) {
    Eigen::VectorXd g_new, y_new;
    if (!transposed) {
      g_new = KG_fac_->solve(rhs_interface - C1_ * g - B1_ * y);
      y_new = K_int_fac_->solve(rhs_bulk - C2_ * g_new);
    } else {
      g_new = KG_fac_->solve(rhs_interface - C1_.transpose() * g - C2_.transpose() * y);
      y_new = K_int_fac_->solve(rhs_bulk - B1_.transpose() * g_new);
    }

    const BoundaryCurve dg = BoundaryCurve::from_interior(im_, g_new - g);
    const BulkField dy =
        BulkField::from_nodal(m_, P_ * (y_new - y), FieldTag::zero_on_boundary);
    const double step = pair_norm(dg, dy, weight_, cfg_.p);
    trace.step_norms.push_back(step);
    if (trace.step_norms.size() >= 2) {
      const double prev = trace.step_norms[trace.step_norms.size() - 2];
      trace.ratios.push_back(prev > 0.0 ? step / prev : 0.0);
    }

    g = std::move(g_new);
    y = std::move(y_new);
    trace.iterations = it;
    if (step <= cfg_.fp_tol) {
      trace.converged = true;
      break;
    }
  }
  if (!trace.converged)
    throw SolverError("linear coupled solve did not converge within " +
                      std::to_string(cfg_.fp_max_iter) + " iterations");

  // block residuals, transposition included
  Eigen::VectorXd r1, r2;
  if (!transposed) {
    r1 = KG_ * g + C1_ * g + B1_ * y - rhs_interface;
    r2 = C2_ * g + K_int_ * y - rhs_bulk;
  } else {
    r1 = KG_ * g + C1_.transpose() * g + C2_.transpose() * y - rhs_interface;
    r2 = B1_.transpose() * g + K_int_ * y - rhs_bulk;
  }
  double si = 1.0, sb = 1.0;
  if (ni > 0) si = std::max(si, rhs_interface.cwiseAbs().maxCoeff());
  if (nb > 0) sb = std::max(sb, rhs_bulk.cwiseAbs().maxCoeff());
  trace.residual_interface = ni > 0 ? r1.cwiseAbs().maxCoeff() / si : 0.0;
  trace.residual_bulk = nb > 0 ? r2.cwiseAbs().maxCoeff() / sb : 0.0;
  trace.residual_ok =
      trace.residual_interface <= cfg_.res_tol && trace.residual_bulk <= cfg_.res_tol;

  TangentPair out{BoundaryCurve::from_interior(im_, g),
                  BulkField::from_nodal(m_, P_ * y, FieldTag::zero_on_boundary)};
  return {std::move(out), std::move(trace)};
}

std::pair<TangentPair, FixedPointTrace> LinearizedOperator::solve(const LinearRHS& rhs) const {
  const Eigen::VectorXd fo = zero_or(rhs.F_Omega, m_.n_nodes());
  Eigen::VectorXd ri = zero_or(rhs.F_Gamma, m_.n1 - 1) + E_.transpose() * fo;
  Eigen::VectorXd rb = P_.transpose() * fo;
  return iterate(ri, rb, false);
}

std::pair<TangentPair, FixedPointTrace> LinearizedOperator::solve_transposed(
    const Eigen::VectorXd& load_interface, const Eigen::VectorXd& load_bulk_full) const {
  const Eigen::VectorXd li = zero_or(load_interface, m_.n1 - 1);
  const Eigen::VectorXd lb = P_.transpose() * zero_or(load_bulk_full, m_.n_nodes());
  return iterate(li, lb, true);
}

LinearRHS LinearizedOperator::direction_rhs(const ControlProfile& h) const {
  LinearRHS rhs;
  const Eigen::VectorXd mh = interval_mass(im_) * h.values;
  rhs.F_Gamma = mh.segment(1, m_.n1 - 1);
  return rhs;
}

LinearRHS LinearizedOperator::second_order_rhs(const TangentPair& t1,
                                               const TangentPair& t2) const {
  LinearRHS rhs;
  const BulkField w_field = BulkField::from_nodal(m_, w_total_, FieldTag::free);
  rhs.F_Omega = second_order_load(m_, base_.gamma, w_field, t1.gamma, t1.y, t2.gamma, t2.y);
  return rhs;
}

std::pair<double, double> LinearizedOperator::residuals(const TangentPair& t,
                                                        const Eigen::VectorXd& rhs_interface,
                                                        const Eigen::VectorXd& rhs_bulk) const {
  const Eigen::VectorXd g = t.gamma.interior();
  const Eigen::VectorXd y = P_.transpose() * t.y.values;
  const Eigen::VectorXd r1 = KG_ * g + C1_ * g + B1_ * y - rhs_interface;
  const Eigen::VectorXd r2 = C2_ * g + K_int_ * y - rhs_bulk;
  const double si = std::max(1.0, rhs_interface.cwiseAbs().maxCoeff());
  const double sb = std::max(1.0, rhs_bulk.cwiseAbs().maxCoeff());
  return {r2.cwiseAbs().maxCoeff() / sb, r1.cwiseAbs().maxCoeff() / si};
}

std::pair<TangentPair, FixedPointTrace> solve_linearized(const StatePair& base,
                                                         const BulkField& v,
                                                         const LinearRHS& rhs,
                                                         const SolveConfig& cfg) {
  return LinearizedOperator(base, v, cfg).solve(rhs);
}

TangentPair apply_Gprime(const LinearizedOperator& op, const ControlProfile& h) {
  return op.solve(op.direction_rhs(h)).first;
}

TangentPair apply_Gprime(const ControlProfile& base_u, const ControlProfile& h,
                         const BulkField& v, const SolveConfig& cfg) {
  const StatePair base = solve_state(base_u, v, cfg).first;
  return apply_Gprime(LinearizedOperator(base, v, cfg), h);
}

TangentPair apply_Gsecond(const LinearizedOperator& op, const ControlProfile& h1,
                          const ControlProfile& h2) {
  const TangentPair t1 = apply_Gprime(op, h1);
  const TangentPair t2 = apply_Gprime(op, h2);
  return op.solve(op.second_order_rhs(t1, t2)).first;
}

TangentPair apply_Gsecond(const ControlProfile& base_u, const ControlProfile& h1,
                          const ControlProfile& h2, const BulkField& v, const SolveConfig& cfg) {
  const StatePair base = solve_state(base_u, v, cfg).first;
  return apply_Gsecond(LinearizedOperator(base, v, cfg), h1, h2);
}

FrechetTable verify_frechet(const ControlProfile& base_u, const ControlProfile& h,
                            const BulkField& v, int order, const std::vector<double>& eps_ladder,
                            const SolveConfig& cfg) {
  if (order != 1 && order != 2) throw ConfigError("remainder order must be 1 or 2");
  FrechetTable table;
  table.order = order;
  table.h_norm = std::sqrt(profile_inner(h, h));

  const StatePair base = solve_state(base_u, v, cfg).first;
  const LinearizedOperator op(base, v, cfg);
  const double weight = pair_weight(v, cfg);

  const TangentPair t0 = apply_Gprime(op, h);
  TangentPair s0;
  if (order == 2) s0 = apply_Gsecond(op, h, h);

  for (double eps : eps_ladder) {
    ControlProfile u_eps = base_u;
    u_eps.values += eps * h.values;
    FrechetRow row;
    row.eps = eps;
    if (order == 1) {
      const StatePair st_eps = solve_state(u_eps, v, cfg).first;
      BoundaryCurve rg = st_eps.gamma;
      rg.values -= base.gamma.values + eps * t0.gamma.values;
      BulkField ry = st_eps.y;
      ry.values -= base.y.values + eps * t0.y.values;
      row.remainder = pair_norm(rg, ry, weight, cfg.p);
    } else {
      const StatePair st_eps = solve_state(u_eps, v, cfg).first;
      const TangentPair t_eps = apply_Gprime(LinearizedOperator(st_eps, v, cfg), h);
      BoundaryCurve rg = t_eps.gamma;
      rg.values -= t0.gamma.values + eps * s0.gamma.values;
      BulkField ry = t_eps.y;
      ry.values -= t0.y.values + eps * s0.y.values;
      row.remainder = pair_norm(rg, ry, weight, cfg.p);
    }
    const double denom = eps * table.h_norm;
    row.ratio = denom > 0.0 ? row.remainder / denom : 0.0;
    table.rows.push_back(row);
  }
  return table;
}

std::pair<double, double> apriori_gamma_bound(const LinearizedOperator& op, const LinearRHS& rhs,
                                              const TangentPair& sol) {
  const SquareMesh& m = op.mesh();
  const IntervalMesh im = m.top_interval();
  const ConstantsLedger& led = op.config().ledger;

  // dual norms through Riesz representatives in the discrete H1-type inner
  // products of the respective test spaces
  double norm_fg = 0.0;
  if (rhs.F_Gamma.size() > 0) {
    SparseSystem sys = assemble_B_Gamma(im, 1.0);
    sys.rhs = rhs.F_Gamma;
    const Eigen::VectorXd rep = solve(sys);
    norm_fg = std::sqrt(std::max(0.0, rep.dot(rhs.F_Gamma)));
  }
  double norm_fo = 0.0;
  if (rhs.F_Omega.size() > 0) {
    const Eigen::SparseMatrix<double> Pf =
        selection_matrix(m.n_nodes(), unconstrained_nodes(m, FieldTag::zero_on_fixed));
    const Eigen::SparseMatrix<double> K2 =
        assemble_B_Omega(m, BoundaryCurve::zero(im)).matrix;
    SparseSystem sys;
    sys.matrix = Pf.transpose() * K2 * Pf;
    sys.rhs = Pf.transpose() * rhs.F_Omega;
    sys.symmetric = true;
    const Eigen::VectorXd rep = solve(sys);
    norm_fo = std::sqrt(std::max(0.0, rep.dot(sys.rhs)));
  }

  const double lam1 = 1.0 + led.beta * led.C_A;
  const double bound =
      (led.alpha / led.theta2) * (led.C_E * lam1 * norm_fo + norm_fg);
  return {compute_norm(NormKind::W1inf0(), sol.gamma), bound};
}

}  // namespace fbp
