#pragma once

#include "fbp/mesh.hpp"

namespace fbp {

// the constants ledger: everything the feasibility bounds and thresholds
// touch. base entries come from defaults, measurements or config overrides;
// the derived block is filled by compute_thresholds and must stay consistent
// with the base block (recomputing is idempotent).
struct ConstantsLedger {
  // problem parameters
  double kappa = 1.0;
  double lambda = 1.0;
  double p = 4.0;
  double q = 4.0 / 3.0;  // conjugate exponent p/(p-1)

  // base constants
  double alpha = 2.0;   // interface inf-sup factor, defaults to 2/kappa
  double beta = 1.0;    // bulk inf-sup constant (measured or overridden)
  double C_A = 20.0;    // coefficient-map bound over the admissible box
  double C_E = 1.0;     // extension operator norm, >= 1
  double theta1 = 0.6;  // self-map margin, must sit in (beta C_A/(1+beta C_A), 1)
  double theta2 = 0.5;  // contraction margin in (0,1)

  // derived block (compute_thresholds)
  double Lambda1 = 0.0;  // 1 + beta C_A
  double Lambda2 = 0.0;  // 1 + 2 beta C_A
  double omega1 = 0.0;
  double omega2 = 0.0;
  double theta3 = 0.0;
  double v_invariance = 0.0;   // self-map bound on ||v||
  double v_contraction = 0.0;  // contraction bound on ||v||
  double v_soc = 0.0;          // second-order smallness bound: theta3 lambda / 2
  double u_radius = 0.0;       // theta1 / alpha
  double uad_radius = 0.0;     // theta1 / (2 alpha)
  double L_G = 0.0;            // formula Lipschitz bound for the solution map
  double L_Gprime = 0.0;       // recorded empirical values, 0 = unset
  double L_Gsecond = 0.0;
  bool derived_filled = false;
};

// data norms feeding the threshold formulas
struct DataNorms {
  double gamma_d_l2 = 0.0;
  double y_d_l2 = 0.0;
  double v_w1p = 0.0;
};

// tolerances and caps shared by the fixed-point solvers
struct SolveConfig {
  double kappa = 1.0;
  double p = 4.0;
  double fp_tol = 1e-11;   // pair-norm distance between successive iterates
  int fp_max_iter = 200;
  double res_tol = 1e-9;   // weak-form residual at the end
  double eps_w = 1e-8;     // floor for the gamma weight in the pair norm
  ConstantsLedger ledger;
};

// fixed data of one control problem instance; v is held as a grid
// interpolant so every consumer sees the identical function, the targets
// stay analytic and are sampled at quadrature points (y_d on the deformed
// domain, composed with the geometry map wherever it is integrated)
struct ProblemData {
  IntervalMesh imesh;
  SquareMesh smesh;
  BulkField v;      // boundary data, tag free
  Fn1 gamma_d;      // interface target
  Fn2 y_d;          // bulk target, physical coordinates
  double lambda = 1.0;

  static ProblemData make(int n_interval, int n_square, const Fn2& v_fn, const Fn1& gamma_d_fn,
                          const Fn2& y_d_fn, double lambda);
};

// weighted norm on state pairs: w(v) * ||gamma||_{1,inf} + ||y||_{1,p} with
// w(v) = max((1 + beta C_A) ||v||_{1,p}, eps_w)
double pair_weight(const BulkField& v, const SolveConfig& cfg);
double pair_norm(const BoundaryCurve& gamma, const BulkField& y, double weight, double p);

}  // namespace fbp
