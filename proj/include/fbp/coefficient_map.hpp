#pragma once

#include <array>

#include "fbp/common.hpp"

namespace fbp {

// pointwise data the coefficient matrix sees: value and slope of the boundary
// curve at some x1, plus the vertical coordinate x2 of the evaluation point
struct CoeffPoint {
  double gamma_val = 0.0;
  double dgamma_val = 0.0;
  double x2 = 0.0;
};

// direction for derivatives of the coefficient map; carries (value, slope) as
// independent pointwise data
struct Direction1D {
  double h_val = 0.0;
  double dh_val = 0.0;
};

struct Matrix2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  double det() const { return a11 * a22 - a12 * a21; }
  double max_abs() const;

  Matrix2 operator+(const Matrix2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
  Matrix2 operator-(const Matrix2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
  Matrix2 scaled(double c) const { return {c * a11, c * a12, c * a21, c * a22}; }

  // (Mv) . w for v, w in R^2
  double apply_dot(const std::array<double, 2>& v, const std::array<double, 2>& w) const {
    return (a11 * v[0] + a12 * v[1]) * w[0] + (a21 * v[0] + a22 * v[1]) * w[1];
  }
};

// phi(a,b) = (1+b^2)/(1+a) evaluated at a = gamma, b = x2 * dgamma
double eval_phi(const CoeffPoint& c);
// (d phi/da, d phi/db)
std::array<double, 2> eval_grad_phi(const CoeffPoint& c);
// second derivatives of phi in (a,b)
Matrix2 eval_hess_phi(const CoeffPoint& c);

// transformed diffusion matrix; det == 1 identically
Matrix2 eval_A(const CoeffPoint& c);
// directional derivative of A at c in direction h
Matrix2 eval_DA(const CoeffPoint& c, const Direction1D& h);
// second directional derivative; symmetric in (h2, h1), only the (2,2) entry
// is nonzero
Matrix2 eval_D2A(const CoeffPoint& c, const Direction1D& h2, const Direction1D& h1);
// Taylor remainder A[gamma+h] - A[gamma] - DA[gamma]<h>
Matrix2 eval_remainder_A(const CoeffPoint& c, const Direction1D& h);

// reference-to-physical map: (x1, x2) -> (x1, (1+gamma(x1)) x2)
std::array<double, 2> map_psi(double x1, double x2, double gamma_at_x1);

}  // namespace fbp
