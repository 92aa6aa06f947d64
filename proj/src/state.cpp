#include "fbp/state.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

#include "fbp/assembly.hpp"

namespace fbp {

ProblemData ProblemData::make(int n_interval, int n_square, const Fn2& v_fn,
                              const Fn1& gamma_d_fn, const Fn2& y_d_fn, double lambda) {
  ProblemData d;
  d.imesh = IntervalMesh::uniform(n_interval);
  d.smesh = SquareMesh::uniform(n_square, n_square);
  d.v = BulkField::from_function(d.smesh, v_fn, FieldTag::free);
  d.gamma_d = gamma_d_fn;
  d.y_d = y_d_fn;
  d.lambda = lambda;
  if (lambda <= 0.0) throw ConfigError("lambda must be positive");
  return d;
}

double pair_weight(const BulkField& v, const SolveConfig& cfg) {
  const double lam1 = 1.0 + cfg.ledger.beta * cfg.ledger.C_A;
  const double w = lam1 * sobolev_norm_w1p(v, cfg.p);
  return std::max(w, cfg.eps_w);
}

double pair_norm(const BoundaryCurve& gamma, const BulkField& y, double weight, double p) {
  return weight * compute_norm(NormKind::W1inf0(), gamma) +
         compute_norm(NormKind::W1p0(p), y);
}

namespace {

// interface load: <u, zeta_l> - B_Omega[y + v, E zeta_l; A[gamma]], for the
// interior interval hats, given the already assembled full-grid stiffness
Eigen::VectorXd t1_rhs(const Eigen::SparseMatrix<double>& K_full, const SquareMesh& m,
                       const ControlProfile& u, const Eigen::VectorXd& w_total) {
  const Eigen::SparseMatrix<double> E = extension_matrix(m);
  const Eigen::VectorXd coupled = E.transpose() * (K_full * w_total);
  const Eigen::VectorXd mu = interval_mass(m.top_interval()) * u.values;
  return mu.segment(1, m.n1 - 1) - coupled;
}

BoundaryCurve t1_solve(const IntervalMesh& im, double kappa, const Eigen::VectorXd& rhs) {
  SparseSystem sys = assemble_B_Gamma(im, kappa);
  sys.rhs = rhs;
  return BoundaryCurve::from_interior(im, solve(sys));
}

// bulk correction with the coefficient frozen at gamma_tilde; factorization
// handed back so the caller can keep it for the next interface load
BulkField t2_solve(const SquareMesh& m, const Eigen::SparseMatrix<double>& K_full,
                   const BulkField& v) {
  const std::vector<int> keep = unconstrained_nodes(m, FieldTag::zero_on_boundary);
  const Eigen::SparseMatrix<double> P = selection_matrix(m.n_nodes(), keep);
  SparseSystem sys;
  sys.matrix = P.transpose() * K_full * P;
  sys.rhs = -(P.transpose() * (K_full * v.values));
  sys.unknown_to_node = keep;
  sys.symmetric = true;
  const Eigen::VectorXd yi = solve(sys);
  return BulkField::from_nodal(m, P * yi, FieldTag::zero_on_boundary);
}

}  // namespace

BoundaryCurve apply_T1(const BoundaryCurve& gamma, const BulkField& y, const ControlProfile& u,
                       const BulkField& v, double kappa) {
  const SquareMesh& m = v.mesh;
  const SparseSystem K = assemble_B_Omega(m, gamma);
  const Eigen::VectorXd w_total = y.values + v.values;
  return t1_solve(gamma.mesh, kappa, t1_rhs(K.matrix, m, u, w_total));
}

BulkField apply_T2(const BoundaryCurve& gamma_tilde, const BulkField& v) {
  const SparseSystem K = assemble_B_Omega(v.mesh, gamma_tilde);
  return t2_solve(v.mesh, K.matrix, v);
}

std::pair<double, double> state_residuals(const StatePair& st, const ControlProfile& u,
                                          const BulkField& v, double kappa) {
  const SquareMesh& m = v.mesh;
  const SparseSystem K = assemble_B_Omega(m, st.gamma);
  const Eigen::VectorXd w_total = st.y.values + v.values;
  const Eigen::VectorXd bulk_res_full = K.matrix * w_total;

  const std::vector<int> keep = unconstrained_nodes(m, FieldTag::zero_on_boundary);
  double rb = 0.0;
  for (int idx : keep) rb = std::max(rb, std::abs(bulk_res_full[idx]));
  double bulk_scale = 1.0;
  const Eigen::VectorXd load_v = K.matrix * v.values;
  for (int idx : keep) bulk_scale = std::max(bulk_scale, std::abs(load_v[idx]));

  const IntervalMesh im = m.top_interval();
  SparseSystem KG = assemble_B_Gamma(im, kappa);
  const Eigen::VectorXd mu = interval_mass(im) * u.values;
  const Eigen::SparseMatrix<double> E = extension_matrix(m);
  const Eigen::VectorXd coupled = E.transpose() * bulk_res_full;
  const Eigen::VectorXd ri =
      KG.matrix * st.gamma.interior() + coupled - mu.segment(1, m.n1 - 1);
  double iface_scale = 1.0;
  for (int l = 0; l < mu.size(); ++l) iface_scale = std::max(iface_scale, std::abs(mu[l]));
  for (int l = 0; l < coupled.size(); ++l)
    iface_scale = std::max(iface_scale, std::abs(coupled[l]));
  return {rb / bulk_scale, ri.cwiseAbs().maxCoeff() / iface_scale};
}

FeasibilityReport check_admissibility(const ControlProfile& u, const BulkField& v,
                                      const ConstantsLedger& led) {
  const double lam1 = 1.0 + led.beta * led.C_A;
  FeasibilityReport rep;
  rep.v_norm = sobolev_norm_w1p(v, led.p);
  rep.v_invariance_bound =
      (1.0 - led.theta1) / (led.alpha * led.C_E * led.C_A * lam1);
  rep.v_contraction_bound =
      (1.0 - led.theta2) / (led.alpha * led.C_E * led.C_A * lam1 * lam1);
  rep.u_norm = std::sqrt(profile_inner(u, u));
  rep.u_radius = led.theta1 / led.alpha;
  rep.uad_radius = led.theta1 / (2.0 * led.alpha);
  rep.invariance_ok = rep.v_norm <= rep.v_invariance_bound;
  rep.contraction_ok = rep.v_norm <= rep.v_contraction_bound;
  rep.u_in_U = rep.u_norm < rep.u_radius;  // open ball
  rep.u_in_Uad = rep.u_norm <= rep.uad_radius;
  rep.all_ok = rep.invariance_ok && rep.contraction_ok && rep.u_in_U;
  return rep;
}

std::pair<StatePair, FixedPointTrace> solve_state(const ControlProfile& u, const BulkField& v,
                                                  const SolveConfig& cfg) {
  const SquareMesh& m = v.mesh;
  if (u.mesh.n != m.n1)
    throw ConfigError("control mesh does not match the top edge of the bulk mesh");
  const IntervalMesh im = m.top_interval();

  FixedPointTrace trace;
  trace.feasibility_warned = !check_admissibility(u, v, cfg.ledger).all_ok;

  const double weight = pair_weight(v, cfg);
  const double ball_y =
      cfg.ledger.beta * cfg.ledger.C_A * sobolev_norm_w1p(v, cfg.p) + 1e-12;

  BoundaryCurve gamma = BoundaryCurve::zero(im);
  BulkField y = BulkField::zero(m, FieldTag::zero_on_boundary);
  SparseSystem K = assemble_B_Omega(m, gamma);

  for (int it = 1; it <= cfg.fp_max_iter; ++it) {
    const Eigen::VectorXd w_total = y.values + v.values;
    BoundaryCurve gamma_new =
        t1_solve(im, cfg.kappa, t1_rhs(K.matrix, m, u, w_total));
    SparseSystem K_new = assemble_B_Omega(m, gamma_new);
    BulkField y_new = t2_solve(m, K_new.matrix, v);

    BoundaryCurve dg = gamma_new;
    dg.values -= gamma.values;
    BulkField dy = y_new;
    dy.values -= y.values;
    const double step = pair_norm(dg, dy, weight, cfg.p);
    trace.step_norms.push_back(step);
    if (trace.step_norms.size() >= 2) {
      const double prev = trace.step_norms[trace.step_norms.size() - 2];
      trace.ratios.push_back(prev > 0.0 ? step / prev : 0.0);
    }

    if (compute_norm(NormKind::W1inf0(), gamma_new) > 1.0 + 1e-12)
      trace.state_constraint_ok = false;
    if (compute_norm(NormKind::W1inf0(), gamma_new) > cfg.ledger.theta1 + 1e-12 ||
        compute_norm(NormKind::W1p0(cfg.p), y_new) > ball_y)
      trace.iterates_in_ball = false;

    gamma = std::move(gamma_new);
    y = std::move(y_new);
    K = std::move(K_new);
    trace.iterations = it;

    if (step <= cfg.fp_tol) {
      trace.converged = true;
      break;
    }
  }
  if (!trace.converged)
    throw SolverError("state fixed point did not converge within " +
                      std::to_string(cfg.fp_max_iter) + " iterations");

  StatePair st{std::move(gamma), std::move(y)};
  const auto res = state_residuals(st, u, v, cfg.kappa);
  trace.residual_bulk = res.first;
  trace.residual_interface = res.second;
  trace.residual_ok = res.first <= cfg.res_tol && res.second <= cfg.res_tol;
  return {std::move(st), std::move(trace)};
}

}  // namespace fbp
