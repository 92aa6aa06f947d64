#pragma once

#include <cstdint>
#include <vector>

#include "fbp/adjoint.hpp"

namespace fbp {

struct OptOptions {
  double opt_tol = 1e-8;
  int max_iter = 500;
  double radius = 0.0;  // admissible ball radius; <= 0 means theta1/(2 alpha)
};

struct OptResult {
  ControlProfile u;
  std::vector<double> cost_history;       // one entry per outer iterate
  std::vector<double> grad_norm_history;  // L2 norms of lambda u + s
  std::vector<double> vi_history;         // projection residuals
  double vi_residual = 0.0;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  FeasibilityReport feasibility;
};

// reduced cost 1/2 ||gamma - gamma_d||^2 + 1/2 || (y+v-y_d o Psi) sqrt(1+gamma) ||^2
// + lambda/2 ||u||^2, all by the assembly quadrature
double eval_cost(const ControlProfile& u, const ProblemData& data, const SolveConfig& cfg);

// reduced gradient lambda u + s via the adjoint solve
ControlProfile eval_gradient(const ControlProfile& u, const ProblemData& data,
                             const SolveConfig& cfg);

// directional derivative through the tangent solve; adjoint-free oracle
double eval_gradient_direction(const ControlProfile& u, const ControlProfile& h,
                               const ProblemData& data, const SolveConfig& cfg);

// radial projection onto the closed L2 ball
ControlProfile project_Uad(const ControlProfile& u, double radius);

// projected gradient with Armijo backtracking; max-iter exhaustion returns
// the best iterate with converged = false instead of throwing
OptResult optimize(const ProblemData& data, const SolveConfig& cfg, const ControlProfile& u0,
                   const OptOptions& opts);

// second derivative of the reduced cost as a bilinear form
double eval_Jsecond(const ControlProfile& u, const ControlProfile& h1, const ControlProfile& h2,
                    const ProblemData& data, const SolveConfig& cfg);

struct SocReport {
  double min_ratio = 0.0;       // min over samples of J''[h,h] / ||h||^2
  double bound = 0.0;           // lambda / 2
  bool curvature_ok = false;
  double v_norm = 0.0;
  double v_soc_bound = 0.0;     // theta3 lambda / 2
  bool premise_ok = false;
  bool at_boundary = false;     // ||u|| sits on the admissible sphere
  int n_samples = 0;
  std::vector<double> ratios;
};

// samples admissible-cone directions at u_bar and tests the curvature bound
SocReport verify_soc(const ControlProfile& u_bar, const ProblemData& data,
                     const SolveConfig& cfg, int n_samples, std::uint64_t seed);

struct GrowthReport {
  double largest_h_norm = 0.0;  // largest sampled ||h|| with both inequalities holding
  bool all_passed = false;
  int n_samples = 0;
  double stationarity_residual = 0.0;
  bool stationarity_warned = false;
  double cost_at_ubar = 0.0;
};

// quadratic growth of J and of the gradient pairing around a stationary point
GrowthReport check_quadratic_growth(const ControlProfile& u_bar, const ProblemData& data,
                                    const SolveConfig& cfg, int samples, std::uint64_t seed,
                                    double stat_tol);

}  // namespace fbp
