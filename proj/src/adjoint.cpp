#include "fbp/adjoint.hpp"

#include <cmath>

namespace fbp {

AdjointLoads eval_f0_f1(const StatePair& state, const BulkField& r, const BulkField& v,
                        const ProblemData& data) {
  const SquareMesh& m = v.mesh;
  const Eigen::VectorXd w_total = state.y.values + v.values;

  AdjointLoads loads;
  loads.f0.assign(m.n1, {0.0, 0.0});
  loads.f1.assign(m.n1, {0.0, 0.0});

  // column sums of the vertical integrals; the 1D weight h1/2 divides out so
  // the accumulated value is the integral over the column at that x1
  const double w1 = 0.5 * m.h1();
  for_each_quad_point2(m, state.gamma, [&](const QuadPoint2& qp) {
    const auto gw = field_gradient(qp, w_total);
    const auto gr = field_gradient(qp, r.values);
    const Matrix2 A1 = eval_DA(qp.coeff, Direction1D{1.0, 0.0});
    const Matrix2 A2 = eval_DA(qp.coeff, Direction1D{0.0, 1.0});
    const auto phys = map_psi(qp.x1, qp.x2, qp.coeff.gamma_val);
    const double diff = field_value(qp, w_total) - data.y_d(phys[0], phys[1]);
    loads.f0[qp.e1][qp.qx] += qp.w * (0.5 * diff * diff - A1.apply_dot(gw, gr));
    loads.f1[qp.e1][qp.qx] -= qp.w * A2.apply_dot(gw, gr);
  });

  const double off = 0.5 / std::sqrt(3.0);
  const double gx[2] = {0.5 - off, 0.5 + off};
  for (int e = 0; e < m.n1; ++e) {
    for (int q = 0; q < 2; ++q) {
      const double x = (e + gx[q]) * m.h1();
      loads.f0[e][q] = state.gamma.value_at(x) - data.gamma_d(x) + loads.f0[e][q] / w1;
      loads.f1[e][q] /= w1;
    }
  }
  return loads;
}

Eigen::VectorXd interface_load(const IntervalMesh& im, const AdjointLoads& loads) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(im.n_nodes());
  const double w1 = 0.5 * im.h();
  const double off = 0.5 / std::sqrt(3.0);
  const double gx[2] = {0.5 - off, 0.5 + off};
  for (int e = 0; e < im.n; ++e) {
    for (int q = 0; q < 2; ++q) {
      const double hat_right = gx[q];           // value of the right-node hat
      const double slope = 1.0 / im.h();
      full[e] += w1 * (loads.f0[e][q] * (1.0 - hat_right) + loads.f1[e][q] * (-slope));
      full[e + 1] += w1 * (loads.f0[e][q] * hat_right + loads.f1[e][q] * slope);
    }
  }
  return full.segment(1, im.n - 1);
}

BoundaryCurve apply_adjoint_T1(const BulkField& r, const StatePair& state, const BulkField& v,
                               const ProblemData& data, double kappa) {
  const IntervalMesh im = v.mesh.top_interval();
  SparseSystem sys = assemble_B_Gamma(im, kappa);
  sys.rhs = interface_load(im, eval_f0_f1(state, r, v, data));
  return BoundaryCurve::from_interior(im, solve(sys));
}

BulkField apply_adjoint_T2(const BoundaryCurve& s_tilde, const StatePair& state,
                           const BulkField& v, const ProblemData& data) {
  const SquareMesh& m = v.mesh;
  const Eigen::SparseMatrix<double> K = assemble_B_Omega(m, state.gamma).matrix;
  const Eigen::SparseMatrix<double> E = extension_matrix(m);
  const Eigen::SparseMatrix<double> P =
      selection_matrix(m.n_nodes(), unconstrained_nodes(m, FieldTag::zero_on_boundary));

  const BulkField w_field =
      BulkField::from_nodal(m, state.y.values + v.values, FieldTag::free);
  const Eigen::VectorXd load = misfit_load(m, state.gamma, w_field, data.y_d);

  const Eigen::VectorXd lift = E * s_tilde.interior();
  SparseSystem sys;
  sys.matrix = P.transpose() * K * P;
  sys.rhs = P.transpose() * (load - K * lift);
  sys.symmetric = true;
  const Eigen::VectorXd r0 = solve(sys);
  return BulkField::from_nodal(m, lift + P * r0, FieldTag::zero_on_fixed);
}

std::pair<AdjointPair, FixedPointTrace> solve_adjoint(const StatePair& state, const BulkField& v,
                                                      const ProblemData& data,
                                                      const SolveConfig& cfg) {
  const SquareMesh& m = v.mesh;
  const LinearizedOperator op(state, v, cfg);

  // loads that do not depend on the adjoint variables: the interface part is
  // the r = 0 evaluation of (f0, f1), the bulk part the weighted misfit
  const BulkField r_zero = BulkField::zero(m, FieldTag::zero_on_fixed);
  const Eigen::VectorXd b_interface =
      interface_load(m.top_interval(), eval_f0_f1(state, r_zero, v, data));
  const BulkField w_field =
      BulkField::from_nodal(m, state.y.values + v.values, FieldTag::free);
  const Eigen::VectorXd b_bulk = misfit_load(m, state.gamma, w_field, data.y_d);

  auto [tp, trace] = op.solve_transposed(b_interface, b_bulk);
  AdjointPair out;
  out.s = tp.gamma;
  out.r = BulkField::from_nodal(
      m, op.extension() * tp.gamma.interior() + tp.y.values, FieldTag::zero_on_fixed);
  return {std::move(out), std::move(trace)};
}

}  // namespace fbp
