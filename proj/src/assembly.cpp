#include "fbp/assembly.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "fbp/quadrature.hpp"

namespace fbp {

Eigen::VectorXd solve(const SparseSystem& sys) {
  if (sys.matrix.rows() != sys.matrix.cols() || sys.matrix.rows() != sys.rhs.size())
    throw SolverError("system dimensions do not match");
  if (sys.symmetric) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(sys.matrix);
    if (ldlt.info() != Eigen::Success) throw SolverError("LDLT factorization failed");
    Eigen::VectorXd x = ldlt.solve(sys.rhs);
    if (ldlt.info() != Eigen::Success) throw SolverError("LDLT solve failed");
    return x;
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(sys.matrix);
  if (lu.info() != Eigen::Success) throw SolverError("LU factorization failed");
  Eigen::VectorXd x = lu.solve(sys.rhs);
  if (lu.info() != Eigen::Success) throw SolverError("LU solve failed");
  return x;
}

SparseSystem assemble_B_Gamma(const IntervalMesh& m, double kappa) {
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
  const int nd = m.n - 1;
  const double k_over_h = kappa * m.n;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(3 * nd);
  for (int e = 0; e < m.n; ++e) {
    // element nodes e, e+1; interior dof ids are node-1
    const int li = e - 1, ri = e;
    if (li >= 0 && li < nd) trips.emplace_back(li, li, k_over_h);
    if (ri >= 0 && ri < nd) trips.emplace_back(ri, ri, k_over_h);
    if (li >= 0 && li < nd && ri >= 0 && ri < nd) {
      trips.emplace_back(li, ri, -k_over_h);
      trips.emplace_back(ri, li, -k_over_h);
    }
  }
  SparseSystem sys;
  sys.matrix.resize(nd, nd);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.rhs = Eigen::VectorXd::Zero(nd);
  sys.unknown_to_node.resize(nd);
  for (int i = 0; i < nd; ++i) sys.unknown_to_node[i] = i + 1;
  sys.symmetric = true;
  return sys;
}

SparseSystem assemble_B_Omega(const SquareMesh& m, const BoundaryCurve& gamma) {
  if (gamma.mesh.n != m.n1) throw ConfigError("curve mesh does not match square grid");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(m.n1) * m.n2 * 16);
  for_each_quad_point2(m, gamma, [&](const QuadPoint2& qp) {
    const Matrix2 A = eval_A(qp.coeff);
    for (int i = 0; i < 4; ++i) {
      const std::array<double, 2> gi{qp.grad[i][0], qp.grad[i][1]};
      for (int j = 0; j < 4; ++j) {
        const std::array<double, 2> gj{qp.grad[j][0], qp.grad[j][1]};
        trips.emplace_back(qp.node[i], qp.node[j], qp.w * A.apply_dot(gj, gi));
      }
    }
  });
  SparseSystem sys;
  sys.matrix.resize(m.n_nodes(), m.n_nodes());
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.rhs = Eigen::VectorXd::Zero(m.n_nodes());
  sys.unknown_to_node.resize(m.n_nodes());
  for (int i = 0; i < m.n_nodes(); ++i) sys.unknown_to_node[i] = i;
  sys.symmetric = true;
  return sys;
}

Eigen::SparseMatrix<double> interval_mass(const IntervalMesh& m) {
  const double h = m.h();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(3 * m.n_nodes());
  for (int e = 0; e < m.n; ++e) {
    trips.emplace_back(e, e, h / 3.0);
    trips.emplace_back(e + 1, e + 1, h / 3.0);
    trips.emplace_back(e, e + 1, h / 6.0);
    trips.emplace_back(e + 1, e, h / 6.0);
  }
  Eigen::SparseMatrix<double> out(m.n_nodes(), m.n_nodes());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::SparseMatrix<double> interval_stiffness_full(const IntervalMesh& m) {
  const double inv_h = static_cast<double>(m.n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(3 * m.n_nodes());
  for (int e = 0; e < m.n; ++e) {
    trips.emplace_back(e, e, inv_h);
    trips.emplace_back(e + 1, e + 1, inv_h);
    trips.emplace_back(e, e + 1, -inv_h);
    trips.emplace_back(e + 1, e, -inv_h);
  }
  Eigen::SparseMatrix<double> out(m.n_nodes(), m.n_nodes());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::VectorXd interval_load(const IntervalMesh& m, const Fn1& f) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m.n_nodes());
  for (int e = 0; e < m.n; ++e) {
    for (const auto& q : quad::gauss2(m.node(e), m.node(e + 1))) {
      const double t = q.x * m.n - e;
      const double fv = f(q.x);
      b[e] += q.w * fv * (1.0 - t);
      b[e + 1] += q.w * fv * t;
    }
  }
  return b;
}

double profile_inner(const Profile1D& a, const Profile1D& b) {
  if (a.mesh.n != b.mesh.n) throw ConfigError("profiles live on different meshes");
  const Eigen::SparseMatrix<double> mass = interval_mass(a.mesh);
  return a.values.dot(mass * b.values);
}

Eigen::SparseMatrix<double> extension_matrix(const SquareMesh& m) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(m.n1 - 1) * m.n2);
  for (int l = 1; l < m.n1; ++l)
    for (int j = 1; j <= m.n2; ++j)
      trips.emplace_back(m.node_index(l, j), l - 1, m.x2(j));
  Eigen::SparseMatrix<double> out(m.n_nodes(), m.n1 - 1);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

std::vector<int> unconstrained_nodes(const SquareMesh& m, FieldTag tag) {
  std::vector<int> keep;
  for (int j = 0; j <= m.n2; ++j) {
    for (int i = 0; i <= m.n1; ++i) {
      const bool constrained = (tag == FieldTag::zero_on_boundary) ? m.on_boundary(i, j)
                             : (tag == FieldTag::zero_on_fixed)    ? m.on_fixed_boundary(i, j)
                                                                   : false;
      if (!constrained) keep.push_back(m.node_index(i, j));
    }
  }
  return keep;
}

Eigen::SparseMatrix<double> selection_matrix(int n_full, const std::vector<int>& keep) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(keep.size());
  for (size_t k = 0; k < keep.size(); ++k) trips.emplace_back(keep[k], static_cast<int>(k), 1.0);
  Eigen::SparseMatrix<double> out(n_full, static_cast<int>(keep.size()));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::SparseMatrix<double> coupling_matrix(const SquareMesh& m, const BoundaryCurve& gamma,
                                            const BulkField& w) {
  if (w.mesh.n1 != m.n1 || w.mesh.n2 != m.n2) throw ConfigError("field mesh mismatch");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(m.n1) * m.n2 * 32);
  for_each_quad_point2(m, gamma, [&](const QuadPoint2& qp) {
    const auto grad_w = field_gradient(qp, w.values);
    for (int c = 0; c < 2; ++c) {
      const int l = qp.hat_node[c];
      if (l <= 0 || l >= m.n1) continue;  // only interior interval dofs carry columns
      const Matrix2 da = eval_DA(qp.coeff, Direction1D{qp.hat_val[c], qp.hat_slope[c]});
      for (int i = 0; i < 4; ++i) {
        const std::array<double, 2> gi{qp.grad[i][0], qp.grad[i][1]};
        trips.emplace_back(qp.node[i], l - 1, qp.w * da.apply_dot(grad_w, gi));
      }
    }
  });
  Eigen::SparseMatrix<double> out(m.n_nodes(), m.n1 - 1);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::VectorXd second_order_load(const SquareMesh& m, const BoundaryCurve& gamma,
                                  const BulkField& w, const BoundaryCurve& g1,
                                  const BulkField& y1, const BoundaryCurve& g2,
                                  const BulkField& y2) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m.n_nodes());
  const double h1 = m.h1();
  for_each_quad_point2(m, gamma, [&](const QuadPoint2& qp) {
    const double s = qp.x1 * m.n1 - qp.e1;
    const Direction1D d1{g1.values[qp.e1] * (1 - s) + g1.values[qp.e1 + 1] * s,
                         (g1.values[qp.e1 + 1] - g1.values[qp.e1]) / h1};
    const Direction1D d2{g2.values[qp.e1] * (1 - s) + g2.values[qp.e1 + 1] * s,
                         (g2.values[qp.e1 + 1] - g2.values[qp.e1]) / h1};
    const Matrix2 da1 = eval_DA(qp.coeff, d1);
    const Matrix2 da2 = eval_DA(qp.coeff, d2);
    const Matrix2 d2a = eval_D2A(qp.coeff, d1, d2);
    const auto gy1 = field_gradient(qp, y1.values);
    const auto gy2 = field_gradient(qp, y2.values);
    const auto gw = field_gradient(qp, w.values);
    for (int i = 0; i < 4; ++i) {
      const std::array<double, 2> gi{qp.grad[i][0], qp.grad[i][1]};
      const double val =
          da2.apply_dot(gy1, gi) + da1.apply_dot(gy2, gi) + d2a.apply_dot(gw, gi);
      out[qp.node[i]] -= qp.w * val;
    }
  });
  return out;
}

// y_d lives on the deformed domain, so sample it at the mapped point.
Eigen::VectorXd misfit_load(const SquareMesh& m, const BoundaryCurve& gamma, const BulkField& w,
                            const Fn2& y_d) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m.n_nodes());
  for_each_quad_point2(m, gamma, [&](const QuadPoint2& qp) {
    const auto phys = map_psi(qp.x1, qp.x2, qp.coeff.gamma_val);
    const double val =
        (field_value(qp, w.values) - y_d(phys[0], phys[1])) * (1.0 + qp.coeff.gamma_val);
    for (int i = 0; i < 4; ++i) out[qp.node[i]] += qp.w * val * qp.shape[i];
  });
  return out;
}

double misfit_value(const SquareMesh& m, const BoundaryCurve& gamma, const BulkField& w,
                    const Fn2& y_d) {
  double acc = 0.0;
  for_each_quad_point2(m, gamma, [&](const QuadPoint2& qp) {
    const auto phys = map_psi(qp.x1, qp.x2, qp.coeff.gamma_val);
    const double diff = field_value(qp, w.values) - y_d(phys[0], phys[1]);
    acc += qp.w * diff * diff * (1.0 + qp.coeff.gamma_val);
  });
  return acc;
}

}  // namespace fbp
