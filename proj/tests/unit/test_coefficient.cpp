#include <cmath>
#include <random>

#include "doctest.h"
#include "fbp/coefficient_map.hpp"
#include "fbp/constants.hpp"

using namespace fbp;

namespace {

CoeffPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ua(-0.49, 0.49);
  std::uniform_real_distribution<double> ub(-0.99, 0.99);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  return CoeffPoint{ua(rng), ub(rng), ux(rng)};
}

}  // namespace

TEST_CASE("phi hits 4 at the worst corner of the admissible box") {
  // a = -1/2, b = x2 * dgamma = -1  ->  (1 + 1) / (1/2)
  CHECK(eval_phi(CoeffPoint{-0.5, -1.0, 1.0}) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(eval_phi(CoeffPoint{0.0, 0.0, 0.3}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("coefficient matrix entries at a generic point") {
  // a = 0.2, b = 0.5 * 0.5 = 0.25
  const Matrix2 A = eval_A(CoeffPoint{0.2, 0.5, 0.5});
  CHECK(A.a11 == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(A.a12 == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(A.a21 == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(A.a22 == doctest::Approx(1.0625 / 1.2).epsilon(1e-15));
}

TEST_CASE("determinant is exactly one over the admissible box") {
  std::mt19937_64 rng(20240701);
  for (int k = 0; k < 10000; ++k) {
    const Matrix2 A = eval_A(random_point(rng));
    CHECK(std::abs(A.det() - 1.0) <= 1e-14);
  }
}

TEST_CASE("flat interface gives the identity matrix") {
  const Matrix2 A = eval_A(CoeffPoint{0.0, 0.0, 0.7});
  CHECK(A.a11 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(A.a12) <= 1e-15);
  CHECK(std::abs(A.a21) <= 1e-15);
  CHECK(A.a22 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("first derivative matches hand values at the flat point") {
  const CoeffPoint c0{0.0, 0.0, 0.6};
  // direction (value only): d/da of [[1+a, -b], [-b, phi]] at a=b=0
  const Matrix2 Da = eval_DA(c0, Direction1D{1.0, 0.0});
  CHECK(Da.a11 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(Da.a12) <= 1e-15);
  CHECK(std::abs(Da.a21) <= 1e-15);
  CHECK(Da.a22 == doctest::Approx(-1.0).epsilon(1e-15));
  // slope-only direction: db = x2 * dh
  const Matrix2 Db = eval_DA(c0, Direction1D{0.0, 1.0});
  CHECK(std::abs(Db.a11) <= 1e-15);
  CHECK(Db.a12 == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(Db.a21 == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(std::abs(Db.a22) <= 1e-15);
}

TEST_CASE("hessian of phi at the flat point is 2 I") {
  const Matrix2 H = eval_hess_phi(CoeffPoint{0.0, 0.0, 0.4});
  CHECK(H.a11 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(H.a12) <= 1e-14);
  CHECK(std::abs(H.a21) <= 1e-14);
  CHECK(H.a22 == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("second derivative only touches the lower right entry") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const CoeffPoint c = random_point(rng);
    const Direction1D h1{ud(rng), ud(rng)}, h2{ud(rng), ud(rng)};
    const Matrix2 D2 = eval_D2A(c, h1, h2);
    CHECK(D2.a11 == 0.0);
    CHECK(D2.a12 == 0.0);
    CHECK(D2.a21 == 0.0);
    // symmetry in the two directions
    const Matrix2 D2s = eval_D2A(c, h2, h1);
    CHECK(std::abs(D2.a22 - D2s.a22) <= 1e-13 * (1.0 + std::abs(D2.a22)));
  }
  // flat point, unit value directions: phi_aa = 2
  const Matrix2 D2 = eval_D2A(CoeffPoint{0.0, 0.0, 0.5}, Direction1D{1.0, 0.0}, Direction1D{1.0, 0.0});
  CHECK(D2.a22 == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("finite-difference ladder for the first derivative, order two") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  const double eps1 = 1e-3, eps2 = 1e-4;
  double worst_order = 10.0;
  for (int k = 0; k < 20; ++k) {
    CoeffPoint c = random_point(rng);
    c.gamma_val *= 0.5;  // keep the shifted point admissible
    c.dgamma_val *= 0.5;
    const Direction1D h{ud(rng), ud(rng)};
    auto rem = [&](double eps) {
      const CoeffPoint cs{c.gamma_val + eps * h.h_val, c.dgamma_val + eps * h.dh_val, c.x2};
      const Matrix2 r = eval_A(cs) - eval_A(c) - eval_DA(c, h).scaled(eps);
      return r.max_abs();
    };
    const double r1 = rem(eps1), r2 = rem(eps2);
    if (r1 > 1e-13 && r2 > 1e-13)
      worst_order = std::min(worst_order, std::log(r1 / r2) / std::log(eps1 / eps2));
  }
  CHECK(worst_order >= 1.9);
}

TEST_CASE("finite-difference ladder for the second derivative, order two") {
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  const double eps1 = 1e-3, eps2 = 1e-4;
  double worst_order = 10.0;
  for (int k = 0; k < 20; ++k) {
    CoeffPoint c = random_point(rng);
    c.gamma_val *= 0.5;
    c.dgamma_val *= 0.5;
    const Direction1D h{ud(rng), ud(rng)}, dir{ud(rng), ud(rng)};
    auto rem = [&](double eps) {
      const CoeffPoint cs{c.gamma_val + eps * h.h_val, c.dgamma_val + eps * h.dh_val, c.x2};
      const Matrix2 r =
          eval_DA(cs, dir) - eval_DA(c, dir) - eval_D2A(c, dir, h).scaled(eps);
      return r.max_abs();
    };
    const double r1 = rem(eps1), r2 = rem(eps2);
    if (r1 > 1e-13 && r2 > 1e-13)
      worst_order = std::min(worst_order, std::log(r1 / r2) / std::log(eps1 / eps2));
  }
  CHECK(worst_order >= 1.9);
}

TEST_CASE("taylor remainder helper agrees with the direct difference") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> ud(-0.4, 0.4);
  for (int k = 0; k < 50; ++k) {
    CoeffPoint c = random_point(rng);
    c.gamma_val *= 0.5;
    c.dgamma_val *= 0.5;
    const Direction1D h{ud(rng), ud(rng)};
    const CoeffPoint cs{c.gamma_val + h.h_val, c.dgamma_val + h.dh_val, c.x2};
    const Matrix2 direct = eval_A(cs) - eval_A(c) - eval_DA(c, h);
    const Matrix2 viafn = eval_remainder_A(c, h);
    CHECK((direct - viafn).max_abs() <= 1e-13 * (1.0 + direct.max_abs()));
  }
}

TEST_CASE("degenerate geometry is rejected") {
  CHECK_THROWS_AS(eval_A(CoeffPoint{-1.0, 0.0, 0.5}), SolverError);
  CHECK_THROWS_AS(eval_phi(CoeffPoint{-1.5, 0.0, 0.5}), SolverError);
}

TEST_CASE("reference-to-physical map") {
  const auto p = map_psi(0.3, 0.5, 0.2);
  CHECK(p[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.6).epsilon(1e-15));
  // top edge lands on 1 + gamma
  const auto q = map_psi(0.3, 1.0, -0.1);
  CHECK(q[1] == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("box bound on the coefficient map and its derivatives") {
  // the optimum sits at a corner of the admissible box, which every scan grid
  // contains, so the value is grid-independent
  CHECK(analytic_CA(40) == doctest::Approx(20.0).epsilon(1e-13));
  CHECK(analytic_CA(120) == doctest::Approx(20.0).epsilon(1e-13));
  CHECK(std::abs(analytic_CA(120) - analytic_CA(240)) <= 1e-12);
  // no admissible point beats the returned bound
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  const double ca = analytic_CA(120);
  for (int k = 0; k < 500; ++k) {
    const CoeffPoint c = random_point(rng);
    CHECK(eval_A(c).max_abs() <= ca + 1e-12);
    const double hv = 0.5 * ud(rng), dhv = ud(rng);
    CHECK(eval_DA(c, Direction1D{hv, dhv}).max_abs() <= ca + 1e-12);
    CHECK(eval_D2A(c, Direction1D{hv, dhv}, Direction1D{0.5 * ud(rng), ud(rng)}).max_abs() <=
          ca + 1e-12);
  }
}
