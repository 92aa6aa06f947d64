#pragma once

#include <array>
#include <utility>
#include <vector>

#include "fbp/tangent.hpp"

namespace fbp {

struct AdjointPair {
  BulkField r;      // vanishes on sides and bottom, restricts to s on top
  BoundaryCurve s;
};

// the two interface load densities, tabulated at the 1D Gauss points so the
// 1D load matches the coupled bulk pairing exactly (same points and weights)
struct AdjointLoads {
  std::vector<std::array<double, 2>> f0;  // [element][gauss point]
  std::vector<std::array<double, 2>> f1;
};

// f0 = (gamma - gamma_d) + 1/2 int |y+v - y_d o Psi|^2 dx2 - int A1 grad(y+v) . grad r dx2
// f1 = - int A2 grad(y+v) . grad r dx2, vertical integrals column by column
AdjointLoads eval_f0_f1(const StatePair& state, const BulkField& r, const BulkField& v,
                        const ProblemData& data);

// interior 1D load vector int f0 zeta + f1 zeta' over interior hats
Eigen::VectorXd interface_load(const IntervalMesh& im, const AdjointLoads& loads);

// interface half-step: 1D solve against the two-part load built from r
BoundaryCurve apply_adjoint_T1(const BulkField& r, const StatePair& state, const BulkField& v,
                               const ProblemData& data, double kappa);

// bulk half-step: solve with Dirichlet trace s_tilde on top, zero elsewhere,
// and the weighted-misfit load
BulkField apply_adjoint_T2(const BoundaryCurve& s_tilde, const StatePair& state,
                           const BulkField& v, const ProblemData& data);

// fixed point of the two half-steps; implemented as the transposed solve of
// the frozen linearization so the duality with the tangent system closes at
// solver tolerance
std::pair<AdjointPair, FixedPointTrace> solve_adjoint(const StatePair& state, const BulkField& v,
                                                      const ProblemData& data,
                                                      const SolveConfig& cfg);

}  // namespace fbp
