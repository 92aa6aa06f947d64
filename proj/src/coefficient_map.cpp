#include "fbp/coefficient_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fbp {

namespace {

// everything below lives on (a, b) = (gamma, x2 * dgamma); 1+a <= 0 means the
// mapped domain has collapsed, which callers must not survive silently
double checked_one_plus_a(double gamma_val) {
  const double opa = 1.0 + gamma_val;
  if (!(opa > 0.0)) {
    throw SolverError("degenerate geometry: 1+gamma = " + std::to_string(opa));
  }
  return opa;
}

}  // namespace

double Matrix2::max_abs() const {
  return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

double eval_phi(const CoeffPoint& c) {
  const double opa = checked_one_plus_a(c.gamma_val);
  const double b = c.x2 * c.dgamma_val;
  return (1.0 + b * b) / opa;
}

std::array<double, 2> eval_grad_phi(const CoeffPoint& c) {
  const double opa = checked_one_plus_a(c.gamma_val);
  const double b = c.x2 * c.dgamma_val;
  return {-(1.0 + b * b) / (opa * opa), 2.0 * b / opa};
}

Matrix2 eval_hess_phi(const CoeffPoint& c) {
  const double opa = checked_one_plus_a(c.gamma_val);
  const double b = c.x2 * c.dgamma_val;
  Matrix2 h;
  h.a11 = 2.0 * (1.0 + b * b) / (opa * opa * opa);
  h.a12 = -2.0 * b / (opa * opa);
  h.a21 = h.a12;
  h.a22 = 2.0 / opa;
  return h;
}

Matrix2 eval_A(const CoeffPoint& c) {
  const double opa = checked_one_plus_a(c.gamma_val);
  const double b = c.x2 * c.dgamma_val;
  Matrix2 a;
  a.a11 = opa;
  a.a12 = -b;
  a.a21 = -b;
  a.a22 = (1.0 + b * b) / opa;
  return a;
}

Matrix2 eval_DA(const CoeffPoint& c, const Direction1D& h) {
  const auto g = eval_grad_phi(c);
  Matrix2 d;
  d.a11 = h.h_val;
  d.a12 = -c.x2 * h.dh_val;
  d.a21 = d.a12;
  d.a22 = g[0] * h.h_val + g[1] * c.x2 * h.dh_val;
  return d;
}

Matrix2 eval_D2A(const CoeffPoint& c, const Direction1D& h2, const Direction1D& h1) {
  const Matrix2 hess = eval_hess_phi(c);
  Matrix2 d;
  d.a22 = hess.a11 * h2.h_val * h1.h_val +
          hess.a12 * c.x2 * (h2.h_val * h1.dh_val + h2.dh_val * h1.h_val) +
          hess.a22 * c.x2 * c.x2 * h2.dh_val * h1.dh_val;
  return d;
}

Matrix2 eval_remainder_A(const CoeffPoint& c, const Direction1D& h) {
  CoeffPoint shifted{c.gamma_val + h.h_val, c.dgamma_val + h.dh_val, c.x2};
  return eval_A(shifted) - eval_A(c) - eval_DA(c, h);
}

std::array<double, 2> map_psi(double x1, double x2, double gamma_at_x1) {
  const double opa = checked_one_plus_a(gamma_at_x1);
  return {x1, opa * x2};
}

}  // namespace fbp
