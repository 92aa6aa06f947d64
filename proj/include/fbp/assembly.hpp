#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <vector>

#include "fbp/coefficient_map.hpp"
#include "fbp/mesh.hpp"

namespace fbp {

struct SparseSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<int> unknown_to_node;  // reduced index -> underlying node index
  bool symmetric = true;
};

// factor and solve; LDLT when symmetric, LU otherwise
Eigen::VectorXd solve(const SparseSystem& sys);

// boundary stiffness kappa * int dgamma dzeta over interior interval hats
SparseSystem assemble_B_Gamma(const IntervalMesh& m, double kappa);

// full-grid stiffness with coefficient A[gamma]; no boundary conditions are
// applied here, callers restrict rows and columns to their unknowns
SparseSystem assemble_B_Omega(const SquareMesh& m, const BoundaryCurve& gamma);

// exact P1 mass matrix over all interval nodes
Eigen::SparseMatrix<double> interval_mass(const IntervalMesh& m);
// 1d stiffness over all nodes, unit coefficient
Eigen::SparseMatrix<double> interval_stiffness_full(const IntervalMesh& m);
// loads int f phi_i with the 2-point rule, over all nodes
Eigen::VectorXd interval_load(const IntervalMesh& m, const Fn1& f);
// L2(I) inner product through the exact P1 mass
double profile_inner(const Profile1D& a, const Profile1D& b);

// vertical lift operator as a matrix: (n_nodes) x (n1 - 1), column l holds
// the nodal values of the lift of interior hat l+1
Eigen::SparseMatrix<double> extension_matrix(const SquareMesh& m);

// node sets kept free by each tag
std::vector<int> unconstrained_nodes(const SquareMesh& m, FieldTag tag);
// 0/1 selection: (n_full) x (#keep)
Eigen::SparseMatrix<double> selection_matrix(int n_full, const std::vector<int>& keep);

// C[k, l] = bulk form of w tested with hat k under coefficient DA[gamma]<hat_{l+1}>;
// columns run over interior interval dofs
Eigen::SparseMatrix<double> coupling_matrix(const SquareMesh& m, const BoundaryCurve& gamma,
                                            const BulkField& w);

// right-hand side collecting the second-derivative terms of the solution map:
// -B[y1, ., DA<g2>] - B[y2, ., DA<g1>] - B[w, ., D2A<g1, g2>], over all nodes
Eigen::VectorXd second_order_load(const SquareMesh& m, const BoundaryCurve& gamma,
                                  const BulkField& w, const BoundaryCurve& g1,
                                  const BulkField& y1, const BoundaryCurve& g2,
                                  const BulkField& y2);

// load (w - y_d)(1 + gamma) against all bulk hats
Eigen::VectorXd misfit_load(const SquareMesh& m, const BoundaryCurve& gamma, const BulkField& w,
                            const Fn2& y_d);
// int (w - y_d)^2 (1 + gamma) with the same quadrature as misfit_load
double misfit_value(const SquareMesh& m, const BoundaryCurve& gamma, const BulkField& w,
                    const Fn2& y_d);

// one tensor-product quadrature point of the bulk rule together with the
// element data needed by the coupled forms
struct QuadPoint2 {
  int e1, e2;       // element indices
  int qx, qy;       // gauss indices within the element (0 or 1)
  double x1, x2, w; // position and weight
  int node[4];      // global ids of the element corners
  double shape[4];
  double grad[4][2];
  CoeffPoint coeff;     // curve data at (x1, x2)
  double hat_val[2];    // the two interval hats alive on this column
  double hat_slope[2];
  int hat_node[2];      // their interval node indices
};

// walks the 2x2 tensor rule over every element; the same traversal (and the
// same points) backs every coupled form, which keeps transposed systems exact
template <class F>
void for_each_quad_point2(const SquareMesh& m, const BoundaryCurve& gamma, F&& f) {
  const double h1 = m.h1(), h2 = m.h2();
  const double off = 0.5 / std::sqrt(3.0);
  const double gx[2] = {0.5 - off, 0.5 + off};
  for (int e2 = 0; e2 < m.n2; ++e2) {
    for (int e1 = 0; e1 < m.n1; ++e1) {
      QuadPoint2 qp;
      qp.e1 = e1;
      qp.e2 = e2;
      qp.node[0] = m.node_index(e1, e2);
      qp.node[1] = m.node_index(e1 + 1, e2);
      qp.node[2] = m.node_index(e1 + 1, e2 + 1);
      qp.node[3] = m.node_index(e1, e2 + 1);
      const double gslope = (gamma.values[e1 + 1] - gamma.values[e1]) / h1;
      for (int a = 0; a < 2; ++a) {
        const double s = gx[a];
        for (int b = 0; b < 2; ++b) {
          const double t = gx[b];
          qp.qx = a;
          qp.qy = b;
          qp.x1 = (e1 + s) * h1;
          qp.x2 = (e2 + t) * h2;
          qp.w = 0.25 * h1 * h2;
          qp.shape[0] = (1 - s) * (1 - t);
          qp.shape[1] = s * (1 - t);
          qp.shape[2] = s * t;
          qp.shape[3] = (1 - s) * t;
          qp.grad[0][0] = -(1 - t) / h1;
          qp.grad[0][1] = -(1 - s) / h2;
          qp.grad[1][0] = (1 - t) / h1;
          qp.grad[1][1] = -s / h2;
          qp.grad[2][0] = t / h1;
          qp.grad[2][1] = s / h2;
          qp.grad[3][0] = -t / h1;
          qp.grad[3][1] = (1 - s) / h2;
          qp.coeff = CoeffPoint{gamma.values[e1] * (1 - s) + gamma.values[e1 + 1] * s, gslope, qp.x2};
          qp.hat_val[0] = 1 - s;
          qp.hat_val[1] = s;
          qp.hat_slope[0] = -1.0 / h1;
          qp.hat_slope[1] = 1.0 / h1;
          qp.hat_node[0] = e1;
          qp.hat_node[1] = e1 + 1;
          f(qp);
        }
      }
    }
  }
}

// gradient of a nodal field at a quadrature point
inline std::array<double, 2> field_gradient(const QuadPoint2& qp, const Eigen::VectorXd& nodal) {
  std::array<double, 2> g{0.0, 0.0};
  for (int k = 0; k < 4; ++k) {
    const double v = nodal[qp.node[k]];
    g[0] += v * qp.grad[k][0];
    g[1] += v * qp.grad[k][1];
  }
  return g;
}

inline double field_value(const QuadPoint2& qp, const Eigen::VectorXd& nodal) {
  double v = 0.0;
  for (int k = 0; k < 4; ++k) v += nodal[qp.node[k]] * qp.shape[k];
  return v;
}

}  // namespace fbp
