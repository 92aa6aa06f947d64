#pragma once

#include <cstdint>
#include <vector>

#include "fbp/problem.hpp"

namespace fbp {

// largest matrix entry produced by the coefficient map or its first two
// directional derivatives over the admissible box |gamma| <= 1/2,
// |dgamma| <= 1, x2 in [0,1], with derivative directions at the box corners.
// the maximand is multilinear in the direction data, so corners suffice, and
// the optimum sits on the box boundary (grid points), making the scan exact
double analytic_CA(int grid = 120);

// interface inf-sup factor 2/kappa
double default_alpha(double kappa);

// reciprocal of the discrete inf-sup value of the bulk form over the
// W^{1,p}_0 / W^{1,q}_0 pair on this mesh, estimated by alternating the
// norm-duality maps with bulk solves (a power iteration). every iterate
// yields a certified lower bound; the running max is returned.
// throws SolverError when the iteration fails to settle
double estimate_beta(const SquareMesh& m, double p, const BoundaryCurve& gamma);

// discrete norm of the vertical-lift extension from W^{1,1}_0(I) (slope
// seminorm) into W^{1,q} on the square, maximized over interior hats and
// seeded random combinations; never reported below 1
double compute_CE(const SquareMesh& m, double q, std::uint64_t seed);

// L2 sizes of the targets and the W^{1,p} size of the boundary datum, as the
// threshold formulas consume them. targets are measured over the reference
// square / interval with a rule two orders past the assembly rule
DataNorms measure_data_norms(const ProblemData& data, const SolveConfig& cfg);

// fills the derived block from the base constants and data norms; recomputing
// is idempotent. throws ConfigError when theta1 leaves its admissible
// interval (beta C_A/(1+beta C_A), 1) or theta2 leaves (0,1)
ConstantsLedger compute_thresholds(const ConstantsLedger& base, const DataNorms& norms);

enum class LipschitzKind { G, Gprime, Gsecond };

struct LipschitzReport {
  LipschitzKind kind = LipschitzKind::G;
  int n_pairs = 0;        // pairs requested
  int n_used = 0;         // pairs actually measured (coincident draws skipped)
  double max_observed = 0.0;
  double reference = 0.0;       // formula bound for G, recorded value otherwise
  bool reference_vacuous = false;  // reference absent or degenerate (== 0)
  bool within_reference = false;
  double pair_weight_used = 0.0;  // gamma weight of the pair norm (may be floored)
};

// empirical Lipschitz quotients of the solution map or its derivatives over
// random admissible control pairs, with the matching formula or recorded
// value alongside
LipschitzReport measure_lipschitz(LipschitzKind kind, const ProblemData& data,
                                  const SolveConfig& cfg, int n_pairs, std::uint64_t seed);

// fractional seminorm of a piecewise-constant slope field on the uniform grid
// with cell width h: the double integral of |f(x)-f(y)|^p |x-y|^(-1-sp)
// restricted to |x-y| >= h (the resolution scale; the unrestricted integral
// diverges for jump functions once s p >= 1), integrated in closed form pair
// by pair. returns the p-th root
double gagliardo_seminorm_slopes(const std::vector<double>& slopes, double h, double s, double p);

// the same seminorm applied to the slope field of a boundary curve
double gagliardo_seminorm(const BoundaryCurve& curve, double s, double p);

}  // namespace fbp
