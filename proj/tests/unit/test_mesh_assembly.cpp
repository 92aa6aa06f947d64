#include <cmath>
#include <random>

#include "doctest.h"
#include "fbp/assembly.hpp"
#include "fbp/expression.hpp"
#include "fbp/quadrature.hpp"

using namespace fbp;

TEST_CASE("interval stiffness with one interior node") {
  const auto m = IntervalMesh::uniform(2);
  const auto sys = assemble_B_Gamma(m, 1.0);
  REQUIRE(sys.matrix.rows() == 1);
  CHECK(sys.matrix.coeff(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(sys.unknown_to_node[0] == 1);
  // kappa scales linearly
  CHECK(assemble_B_Gamma(m, 2.5).matrix.coeff(0, 0) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("interface quadratic form reproduces the slope integral") {
  // interpolant of x(1-x) on 4 elements: slopes 3/4, 1/4, -1/4, -3/4
  const auto m = IntervalMesh::uniform(4);
  const auto sys = assemble_B_Gamma(m, 1.0);
  Eigen::VectorXd zi(3);
  zi << 0.1875, 0.25, 0.1875;
  const double form = zi.dot(sys.matrix * zi);
  CHECK(form == doctest::Approx(0.3125).epsilon(1e-14));
}

TEST_CASE("flat bulk stiffness center diagonal") {
  const auto m = SquareMesh::uniform(2, 2);
  const auto sys = assemble_B_Omega(m, BoundaryCurve::zero(m.top_interval()));
  const int c = m.node_index(1, 1);
  CHECK(sys.matrix.coeff(c, c) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  // row sums of a pure stiffness matrix vanish (constants in the kernel)
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.n_nodes());
  CHECK((sys.matrix * ones).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("bulk stiffness is symmetric for a bent interface") {
  const auto m = SquareMesh::uniform(4, 4);
  Eigen::VectorXd gv(5);
  gv << 0.0, 0.1, 0.3, 0.05, 0.0;
  const auto gamma = BoundaryCurve::from_nodal(m.top_interval(), gv);
  const auto sys = assemble_B_Omega(m, gamma);
  Eigen::MatrixXd D = Eigen::MatrixXd(sys.matrix);
  CHECK((D - D.transpose()).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("interval mass entries and row sums") {
  const auto m = IntervalMesh::uniform(2);
  const auto M = interval_mass(m);
  CHECK(M.coeff(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(M.coeff(0, 1) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
  CHECK(ones.dot(M * ones) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("full interval stiffness entries") {
  const auto m = IntervalMesh::uniform(2);
  const auto K = interval_stiffness_full(m);
  CHECK(K.coeff(1, 1) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(K.coeff(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(K.coeff(0, 1) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("interval load of the constant function") {
  const auto m = IntervalMesh::uniform(4);
  const auto b = interval_load(m, [](double) { return 1.0; });
  CHECK(b[0] == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(b[2] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(b.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("profile inner product through the mass matrix") {
  const auto m = IntervalMesh::uniform(8);
  const auto one = Profile1D::from_function(m, [](double) { return 1.0; });
  const auto lin = Profile1D::from_function(m, [](double x) { return x; });
  CHECK(profile_inner(one, one) == doctest::Approx(1.0).epsilon(1e-14));
  // int x dx = 1/2, exact for P1
  CHECK(profile_inner(one, lin) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("one dimensional solve reproduces the parabola") {
  // -g'' = 1 with pinned ends has the P1 interpolant of x(1-x)/2 as exact
  // discrete solution on a uniform grid
  const auto m = IntervalMesh::uniform(8);
  auto sys = assemble_B_Gamma(m, 1.0);
  const auto load = interval_load(m, [](double) { return 1.0; });
  sys.rhs = load.segment(1, m.n - 1);
  const auto g = solve(sys);
  for (int i = 0; i < m.n - 1; ++i) {
    const double x = m.node(i + 1);
    CHECK(g[i] == doctest::Approx(0.5 * x * (1.0 - x)).epsilon(1e-13));
  }
}

TEST_CASE("worst slope norm of the parabola interpolant") {
  const auto m = IntervalMesh::uniform(4);
  const auto f = Profile1D::from_function(m, [](double x) { return x * (1.0 - x); });
  CHECK(compute_norm(NormKind::W1inf0(), f) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("slope p-norm on curves matches the stiffness form at p = 2") {
  const auto m = IntervalMesh::uniform(8);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  Eigen::VectorXd zi(m.n - 1);
  for (int i = 0; i < zi.size(); ++i) zi[i] = ud(rng);
  const auto z = BoundaryCurve::from_interior(m, zi);
  const auto K = interval_stiffness_full(m);
  const double via_form = std::sqrt(z.values.dot(K * z.values));
  CHECK(compute_norm(NormKind::W1p0(2.0), z) == doctest::Approx(via_form).epsilon(1e-13));
}

TEST_CASE("bulk gradient p-norm matches the stiffness form at p = 2") {
  const auto m = SquareMesh::uniform(4, 4);
  const auto sys = assemble_B_Omega(m, BoundaryCurve::zero(m.top_interval()));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m.n_nodes());
  for (int j = 1; j < m.n2; ++j)
    for (int i = 1; i < m.n1; ++i) v[m.node_index(i, j)] = ud(rng);
  const auto y = BulkField::from_nodal(m, v, FieldTag::zero_on_boundary);
  const double via_form = std::sqrt(v.dot(sys.matrix * v));
  CHECK(compute_norm(NormKind::W1p0(2.0), y) == doctest::Approx(via_form).epsilon(1e-12));
}

TEST_CASE("vertical lift of a hat") {
  const auto m = SquareMesh::uniform(2, 2);
  Eigen::VectorXd zi(1);
  zi << 1.0;
  const auto z = BoundaryCurve::from_interior(m.top_interval(), zi);
  const auto lift = extend(z, m);
  CHECK(lift.tag == FieldTag::zero_on_fixed);
  CHECK(lift.value(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(lift.value(1, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lift.value(0, 2) == 0.0);
  CHECK(lift.value_at(0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("lift operator as a matrix agrees with the lift") {
  const auto m = SquareMesh::uniform(4, 4);
  const auto E = extension_matrix(m);
  REQUIRE(E.rows() == m.n_nodes());
  REQUIRE(E.cols() == m.n1 - 1);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  Eigen::VectorXd zi(m.n1 - 1);
  for (int i = 0; i < zi.size(); ++i) zi[i] = ud(rng);
  const auto z = BoundaryCurve::from_interior(m.top_interval(), zi);
  const auto lift = extend(z, m);
  CHECK((Eigen::VectorXd(E * zi) - lift.values).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("free node sets by boundary tag") {
  const auto m = SquareMesh::uniform(4, 4);
  CHECK(unconstrained_nodes(m, FieldTag::zero_on_boundary).size() == 9);
  // zero_on_fixed keeps the interior plus the interior of the top edge
  CHECK(unconstrained_nodes(m, FieldTag::zero_on_fixed).size() == 12);
  CHECK(unconstrained_nodes(m, FieldTag::free).size() == 25);
  const auto keep = unconstrained_nodes(m, FieldTag::zero_on_boundary);
  const auto P = selection_matrix(m.n_nodes(), keep);
  CHECK(P.rows() == m.n_nodes());
  CHECK(P.cols() == 9);
  CHECK(P.sum() == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("full sobolev norm on simple fields") {
  const auto m = SquareMesh::uniform(4, 4);
  const auto c = BulkField::from_function(m, [](double, double) { return 1.0; }, FieldTag::free);
  CHECK(sobolev_norm_w1p(c, 4.0) == doctest::Approx(1.0).epsilon(1e-14));
  const auto lin = BulkField::from_function(m, [](double, double x2) { return x2; }, FieldTag::free);
  // int x2^2 = 1/3, int |grad|^2 = 1
  CHECK(sobolev_norm_w1p(lin, 2.0) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("misfit integral and load on flat geometry") {
  const auto m = SquareMesh::uniform(4, 4);
  const auto gamma = BoundaryCurve::zero(m.top_interval());
  const auto w = BulkField::from_function(m, [](double, double) { return 2.0; }, FieldTag::free);
  const auto zero_fn = [](double, double) { return 0.0; };
  CHECK(misfit_value(m, gamma, w, zero_fn) == doctest::Approx(4.0).epsilon(1e-13));
  const auto load = misfit_load(m, gamma, w, zero_fn);
  // sum over hats is the integral of (w - y_d)(1 + gamma)
  CHECK(load.sum() == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("quadrature rules hit their design order") {
  double acc = 0.0;
  for (const auto& q : quad::gauss2(0.0, 1.0)) acc += q.w * q.x * q.x * q.x;
  CHECK(acc == doctest::Approx(0.25).epsilon(1e-15));
  acc = 0.0;
  for (const auto& q : quad::gauss5(0.0, 1.0)) acc += q.w * std::pow(q.x, 9);
  CHECK(acc == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("expression parser basics") {
  const auto e = Expression::parse("0.05*x2*sin(pi*x1)");
  CHECK(e.uses_x2());
  CHECK(e.eval(0.5, 1.0) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(e.eval(0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));

  CHECK(Expression::parse("2+3*2^2").eval(0.0) == doctest::Approx(14.0).epsilon(1e-15));
  // power binds right
  CHECK(Expression::parse("2^3^2").eval(0.0) == doctest::Approx(512.0).epsilon(1e-15));
  CHECK(Expression::parse("x1*(1-x1)/2").eval(0.5) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK_FALSE(Expression::parse("x1*(1-x1)").uses_x2());

  CHECK_THROWS_AS(Expression::parse("x1 +"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("frobnicate(x1)"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("(x1"), ConfigError);
}

TEST_CASE("boundary curve construction guards") {
  const auto m = IntervalMesh::uniform(4);
  Eigen::VectorXd bad(5);
  bad << 0.1, 0.0, 0.0, 0.0, 0.0;
  CHECK_THROWS_AS(BoundaryCurve::from_nodal(m, bad), ConfigError);
  Eigen::VectorXd short_vec(2);
  short_vec << 0.0, 0.0;
  CHECK_THROWS_AS(BoundaryCurve::from_interior(m, short_vec), ConfigError);
  CHECK_THROWS_AS(IntervalMesh::uniform(1), ConfigError);
  CHECK_THROWS_AS(SquareMesh::uniform(1, 4), ConfigError);
}
