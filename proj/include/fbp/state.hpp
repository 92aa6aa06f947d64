#pragma once

#include <utility>
#include <vector>

#include "fbp/problem.hpp"

namespace fbp {

struct StatePair {
  BoundaryCurve gamma;
  BulkField y;  // zero on the whole boundary, the lift v carries the data
};

// iteration log of a fixed-point solve; the same shape is reused by the
// state, tangent and adjoint iterations
struct FixedPointTrace {
  std::vector<double> step_norms;  // pair-norm distance between iterates
  std::vector<double> ratios;      // successive step quotients
  double residual_bulk = 0.0;      // weak-form residuals at the last iterate
  double residual_interface = 0.0;
  int iterations = 0;
  bool converged = false;
  bool residual_ok = false;
  bool feasibility_warned = false;   // admissibility bounds failed on entry
  bool state_constraint_ok = true;   // |dgamma| <= 1 held at every iterate
  bool iterates_in_ball = true;      // ball membership held at every iterate
};

// the numbers behind the self-map / contraction / control-radius conditions,
// all evaluated, none enforced
struct FeasibilityReport {
  double v_norm = 0.0;
  double v_invariance_bound = 0.0;
  double v_contraction_bound = 0.0;
  double u_norm = 0.0;
  double u_radius = 0.0;
  double uad_radius = 0.0;
  bool invariance_ok = false;
  bool contraction_ok = false;
  bool u_in_U = false;      // strict: ||u|| < theta1/alpha
  bool u_in_Uad = false;    // ||u|| <= theta1/(2 alpha)
  bool all_ok = false;
};

// one interface half-step: solve the 1D system for a new curve given the
// current iterate, with the bulk form tested against lifted 1D hats
BoundaryCurve apply_T1(const BoundaryCurve& gamma, const BulkField& y, const ControlProfile& u,
                       const BulkField& v, double kappa);

// one bulk half-step: zero-boundary correction so gamma_tilde's coefficient
// problem holds with the lift v
BulkField apply_T2(const BoundaryCurve& gamma_tilde, const BulkField& v);

// Picard iteration from (0,0); returns the fixed point and its trace.
// throws SolverError when fp_max_iter is exhausted or the geometry collapses
std::pair<StatePair, FixedPointTrace> solve_state(const ControlProfile& u, const BulkField& v,
                                                  const SolveConfig& cfg);

FeasibilityReport check_admissibility(const ControlProfile& u, const BulkField& v,
                                      const ConstantsLedger& ledger);

// weak-form residuals of the coupled system at (gamma, y): max over interior
// bulk hats and over lifted interface hats, relative to the load scale
std::pair<double, double> state_residuals(const StatePair& st, const ControlProfile& u,
                                          const BulkField& v, double kappa);

}  // namespace fbp
