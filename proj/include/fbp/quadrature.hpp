#pragma once

#include <array>
#include <cmath>

namespace fbp::quad {

struct Point1 {
  double x;
  double w;
};

// 2-point Gauss rule on [a,b], exact through cubics
inline std::array<Point1, 2> gauss2(double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double off = half / std::sqrt(3.0);
  return {Point1{mid - off, half}, Point1{mid + off, half}};
}

// 5-point Gauss rule on [a,b], used where a rule well beyond the assembly
// order is wanted (error measurement against closed-form solutions)
inline std::array<Point1, 5> gauss5(double a, double b) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<Point1, 5> out;
  for (int i = 0; i < 5; ++i) out[i] = Point1{mid + half * xs[i], half * ws[i]};
  return out;
}

}  // namespace fbp::quad
