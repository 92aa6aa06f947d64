#pragma once

#include <Eigen/SparseCholesky>
#include <memory>
#include <utility>
#include <vector>

#include "fbp/assembly.hpp"
#include "fbp/state.hpp"

namespace fbp {

// loads of the generic linear coupled system; F_Omega is tested against
// z + E zeta (all nodes), F_Gamma against interior interval hats
struct LinearRHS {
  Eigen::VectorXd F_Omega;  // size: bulk node count (may be size 0 for zero)
  Eigen::VectorXd F_Gamma;  // size: n1 - 1 (may be size 0 for zero)
};

struct TangentPair {
  BoundaryCurve gamma;
  BulkField y;  // zero on the whole boundary
};

// frozen linearization around a base state: holds the assembled blocks and
// factorizations, and runs the two-half-step iteration for the forward
// system and for its exact transpose. the same quadrature backs every block,
// so the transposed solve is the discrete adjoint to roundoff.
class LinearizedOperator {
 public:
  LinearizedOperator(const StatePair& base, const BulkField& v, const SolveConfig& cfg);

  // forward: interface row gets F_Gamma + E^T F_Omega, bulk row P^T F_Omega
  std::pair<TangentPair, FixedPointTrace> solve(const LinearRHS& rhs) const;

  // transposed system: interface row gets load_interface as is, bulk row
  // P^T load_bulk_full; returns (gamma = interface solution, y = bulk part)
  std::pair<TangentPair, FixedPointTrace> solve_transposed(
      const Eigen::VectorXd& load_interface, const Eigen::VectorXd& load_bulk_full) const;

  // rhs builders
  LinearRHS direction_rhs(const ControlProfile& h) const;  // F_Gamma = <h, .>, F_Omega = 0
  LinearRHS second_order_rhs(const TangentPair& t1, const TangentPair& t2) const;

  const SquareMesh& mesh() const { return m_; }
  const SolveConfig& config() const { return cfg_; }
  const StatePair& base() const { return base_; }
  const Eigen::VectorXd& total_state() const { return w_total_; }  // base.y + v
  const Eigen::SparseMatrix<double>& K_full() const { return K_full_; }
  const Eigen::SparseMatrix<double>& extension() const { return E_; }
  const Eigen::SparseMatrix<double>& selection() const { return P_; }

  // block residuals of the assembled system at (gamma, y) against rhs
  std::pair<double, double> residuals(const TangentPair& t, const Eigen::VectorXd& rhs_interface,
                                      const Eigen::VectorXd& rhs_bulk) const;

 private:
  std::pair<TangentPair, FixedPointTrace> iterate(const Eigen::VectorXd& rhs_interface,
                                                  const Eigen::VectorXd& rhs_bulk,
                                                  bool transposed) const;

  SquareMesh m_;
  IntervalMesh im_;
  StatePair base_;
  SolveConfig cfg_;
  double weight_ = 0.0;
  Eigen::VectorXd w_total_;
  Eigen::SparseMatrix<double> E_, P_;
  Eigen::SparseMatrix<double> K_full_, C_full_;
  Eigen::SparseMatrix<double> KG_;                  // interface stiffness
  Eigen::SparseMatrix<double> B1_, C1_, C2_, K_int_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> KG_fac_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> K_int_fac_;
};

// linear coupled solve around an explicit base state
std::pair<TangentPair, FixedPointTrace> solve_linearized(const StatePair& base,
                                                         const BulkField& v,
                                                         const LinearRHS& rhs,
                                                         const SolveConfig& cfg);

// first derivative of the control-to-state map in direction h; the base-state
// overload skips the nonlinear solve
TangentPair apply_Gprime(const ControlProfile& base_u, const ControlProfile& h,
                         const BulkField& v, const SolveConfig& cfg);
TangentPair apply_Gprime(const LinearizedOperator& op, const ControlProfile& h);

// second derivative in directions (h1, h2); symmetric
TangentPair apply_Gsecond(const ControlProfile& base_u, const ControlProfile& h1,
                          const ControlProfile& h2, const BulkField& v, const SolveConfig& cfg);
TangentPair apply_Gsecond(const LinearizedOperator& op, const ControlProfile& h1,
                          const ControlProfile& h2);

struct FrechetRow {
  double eps = 0.0;
  double remainder = 0.0;  // pair norm of the remainder
  double ratio = 0.0;      // remainder / (eps * ||h||_{L2})
};

struct FrechetTable {
  int order = 1;
  double h_norm = 0.0;
  std::vector<FrechetRow> rows;
};

// remainder-quotient ladder for the first or second derivative
FrechetTable verify_frechet(const ControlProfile& base_u, const ControlProfile& h,
                            const BulkField& v, int order, const std::vector<double>& eps_ladder,
                            const SolveConfig& cfg);

// computable form of the a-priori estimate for the linear system: returns
// (lhs, bound) with dual norms taken through discrete W^{1,2}_0 Riesz
// representatives on each test space
std::pair<double, double> apriori_gamma_bound(const LinearizedOperator& op, const LinearRHS& rhs,
                                              const TangentPair& sol);

}  // namespace fbp
