#include "fbp/constants.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fbp/assembly.hpp"
#include "fbp/coefficient_map.hpp"
#include "fbp/quadrature.hpp"
#include "fbp/state.hpp"
#include "fbp/tangent.hpp"

namespace fbp {

double analytic_CA(int grid) {
  if (grid < 2) throw ConfigError("coefficient-bound scan needs at least a 2x2x2 grid");
  // direction data at the corners of the admissible increment box
  const double hv[2] = {-0.5, 0.5};
  const double dv[2] = {-1.0, 1.0};
  Direction1D corners[4];
  int nc = 0;
  for (double h : hv)
    for (double d : dv) corners[nc++] = Direction1D{h, d};

  double best = 0.0;
  for (int ia = 0; ia <= grid; ++ia) {
    const double a = -0.5 + static_cast<double>(ia) / grid;
    for (int is = 0; is <= grid; ++is) {
      const double slope = -1.0 + 2.0 * static_cast<double>(is) / grid;
      for (int ix = 0; ix <= grid; ++ix) {
        const double x2 = static_cast<double>(ix) / grid;
        const CoeffPoint c{a, slope, x2};
        best = std::max(best, eval_A(c).max_abs());
        for (const auto& d1 : corners) {
          best = std::max(best, eval_DA(c, d1).max_abs());
          for (const auto& d2 : corners)
            best = std::max(best, eval_D2A(c, d1, d2).max_abs());
        }
      }
    }
  }
  return best;
}

double default_alpha(double kappa) {
  if (kappa <= 0.0) throw ConfigError("surface tension must be positive");
  return 2.0 / kappa;
}

namespace {

// Sum over quadrature points of w * |grad u|^e, gradients on the reference
// square. the traversal only reads node positions, the curve argument feeds
// the coefficient slot we ignore here.
double grad_power_sum(const SquareMesh& m, const BoundaryCurve& gamma,
                      const Eigen::VectorXd& nodal, double e) {
  double acc = 0.0;
  for_each_quad_point2(m, gamma, [&](const QuadPoint2& qp) {
    const auto g = field_gradient(qp, nodal);
    acc += qp.w * std::pow(g[0] * g[0] + g[1] * g[1], 0.5 * e);
  });
  return acc;
}

struct DualityLoad {
  Eigen::VectorXd F;   // raw duality load against every nodal hat
  double scale = 0.0;  // dividing F by this certifies dual norm <= 1
};

// load z -> sum w g(grad u) . grad z with g(v) = (|v|^2 + delta^2)^{(e-2)/2} v;
// the companion scale is the exact Hoelder majorant of its dual norm
DualityLoad duality_load(const SquareMesh& m, const BoundaryCurve& gamma,
                         const Eigen::VectorXd& nodal, double e) {
  DualityLoad out;
  out.F = Eigen::VectorXd::Zero(nodal.size());
  double gmax = 0.0;
  for_each_quad_point2(m, gamma, [&](const QuadPoint2& qp) {
    const auto g = field_gradient(qp, nodal);
    gmax = std::max(gmax, std::sqrt(g[0] * g[0] + g[1] * g[1]));
  });
  const double delta = e < 2.0 ? 1e-12 * gmax : 0.0;
  const double conj = e / (e - 1.0);
  double dual_sum = 0.0;
  for_each_quad_point2(m, gamma, [&](const QuadPoint2& qp) {
    const auto g = field_gradient(qp, nodal);
    const double mag2 = g[0] * g[0] + g[1] * g[1] + delta * delta;
    const double coef = std::pow(mag2, 0.5 * (e - 2.0));
    dual_sum += qp.w * std::pow(coef * std::sqrt(mag2), conj);
    for (int k = 0; k < 4; ++k)
      out.F[qp.node[k]] +=
          qp.w * coef * (g[0] * qp.grad[k][0] + g[1] * qp.grad[k][1]);
  });
  out.scale = std::pow(dual_sum, 1.0 / conj);
  return out;
}

}  // namespace

double estimate_beta(const SquareMesh& m, double p, const BoundaryCurve& gamma) {
  if (p < 2.0) throw ConfigError("bulk inf-sup estimation needs p >= 2");
  const double q = p / (p - 1.0);

  const Eigen::SparseMatrix<double> K_full = assemble_B_Omega(m, gamma).matrix;
  const auto keep = unconstrained_nodes(m, FieldTag::zero_on_boundary);
  const Eigen::SparseMatrix<double> P =
      selection_matrix(static_cast<int>(K_full.rows()), keep);
  const Eigen::SparseMatrix<double> K = P.transpose() * K_full * P;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> fac(K);
  if (fac.info() != Eigen::Success)
    throw SolverError("bulk stiffness factorization failed in the inf-sup scan");

  std::mt19937_64 rng(0x5eedbeef);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n_int = static_cast<int>(keep.size());

  double best = 0.0;
  const int restarts = 3, max_iter = 500;
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd f(n_int);
    for (int i = 0; i < n_int; ++i) f[i] = gauss(rng);
    Eigen::VectorXd y = P * fac.solve(f);  // warm start, ratio not certified yet

    double prev = -1.0;
    int settled = 0;
    bool done = false;
    for (int it = 0; it < max_iter; ++it) {
      // steepest-ascent direction of ||K^{-1} F||_p through the duality map
      const double ynorm = std::pow(grad_power_sum(m, gamma, y, p), 1.0 / p);
      if (!(ynorm > 0.0)) break;
      DualityLoad G = duality_load(m, gamma, y, p);
      const Eigen::VectorXd zhat =
          P * fac.solve(P.transpose() * (G.F / std::pow(ynorm, p - 1.0)));
      // best dual-ball point against zhat, certified norm one
      DualityLoad Fd = duality_load(m, gamma, zhat, q);
      y = P * fac.solve(P.transpose() * (Fd.F / Fd.scale));
      const double ratio = std::pow(grad_power_sum(m, gamma, y, p), 1.0 / p);
      best = std::max(best, ratio);
      if (std::abs(ratio - prev) <= 1e-10 * std::max(1.0, ratio)) {
        if (++settled >= 2) {
          done = true;
          break;
        }
      } else {
        settled = 0;
      }
      prev = ratio;
    }
    if (!done) throw SolverError("inf-sup power iteration did not settle");
  }
  return best;
}

double compute_CE(const SquareMesh& m, double q, std::uint64_t seed) {
  if (q < 1.0) throw ConfigError("extension norm needs an integrability order >= 1");
  const IntervalMesh im = m.top_interval();
  const double h = im.h();

  auto ratio_of = [&](const BoundaryCurve& zeta) {
    double semi = 0.0;
    for (int e = 0; e < im.n; ++e) semi += h * std::abs(zeta.slope(e));
    if (semi <= 1e-300) return 0.0;
    return sobolev_norm_w1p(extend(zeta, m), q) / semi;
  };

  double best = 0.0;
  for (int i = 1; i < im.n; ++i) {
    Eigen::VectorXd inner = Eigen::VectorXd::Zero(im.n - 1);
    inner[i - 1] = 1.0;
    best = std::max(best, ratio_of(BoundaryCurve::from_interior(im, inner)));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < 24; ++k) {
    Eigen::VectorXd inner(im.n - 1);
    for (int i = 0; i < inner.size(); ++i) inner[i] = gauss(rng);
    best = std::max(best, ratio_of(BoundaryCurve::from_interior(im, inner)));
  }
  return std::max(1.0, best);
}

DataNorms measure_data_norms(const ProblemData& data, const SolveConfig& cfg) {
  DataNorms out;
  double acc = 0.0;
  for (int e = 0; e < data.imesh.n; ++e)
    for (const auto& pt : quad::gauss5(data.imesh.node(e), data.imesh.node(e + 1))) {
      const double g = data.gamma_d(pt.x);
      acc += pt.w * g * g;
    }
  out.gamma_d_l2 = std::sqrt(acc);

  acc = 0.0;
  const auto& sm = data.smesh;
  for (int e1 = 0; e1 < sm.n1; ++e1)
    for (int e2 = 0; e2 < sm.n2; ++e2)
      for (const auto& px : quad::gauss5(e1 * sm.h1(), (e1 + 1) * sm.h1()))
        for (const auto& py : quad::gauss5(e2 * sm.h2(), (e2 + 1) * sm.h2())) {
          const double yd = data.y_d(px.x, py.x);
          acc += px.w * py.w * yd * yd;
        }
  out.y_d_l2 = std::sqrt(acc);

  out.v_w1p = sobolev_norm_w1p(data.v, cfg.p);
  return out;
}

ConstantsLedger compute_thresholds(const ConstantsLedger& base, const DataNorms& norms) {
  ConstantsLedger led = base;
  if (led.kappa <= 0.0 || led.lambda <= 0.0)
    throw ConfigError("kappa and lambda must be positive");
  if (led.alpha <= 0.0 || led.beta <= 0.0 || led.C_A <= 0.0 || led.C_E < 1.0)
    throw ConfigError("base constants must be positive (and C_E >= 1)");
  if (led.p <= 1.0) throw ConfigError("p must exceed 1");
  led.q = led.p / (led.p - 1.0);

  const double theta1_low = led.beta * led.C_A / (1.0 + led.beta * led.C_A);
  if (!(led.theta1 > theta1_low && led.theta1 < 1.0))
    throw ConfigError("theta1 must lie strictly between beta C_A/(1 + beta C_A) and 1");
  if (!(led.theta2 > 0.0 && led.theta2 < 1.0))
    throw ConfigError("theta2 must lie strictly between 0 and 1");

  led.Lambda1 = 1.0 + led.beta * led.C_A;
  led.Lambda2 = 1.0 + 2.0 * led.beta * led.C_A;
  led.omega1 = 1.0 + norms.gamma_d_l2;
  led.omega2 = (1.0 - led.theta1) / (led.alpha * led.C_E * led.C_A) + norms.y_d_l2;

  const double aECA = led.alpha * led.C_E * led.C_A;
  led.v_invariance = (1.0 - led.theta1) / (aECA * led.Lambda1);
  led.v_contraction = (1.0 - led.theta2) / (aECA * led.Lambda1 * led.Lambda1);
  led.u_radius = led.theta1 / led.alpha;
  led.uad_radius = led.theta1 / (2.0 * led.alpha);
  led.L_G = (led.alpha / led.theta2) * led.Lambda1 * led.Lambda1 * norms.v_w1p;

  const double numer = led.theta2 * led.theta2 / (led.alpha * led.alpha * led.Lambda1);
  const double inner = led.alpha * led.C_E * led.Lambda1 * (led.omega1 + 0.5 * led.omega2 * led.omega2) +
                       2.0 * led.beta * led.omega2;
  const double denom = (led.C_A * led.Lambda2 / led.theta2) * inner +
                       2.0 * led.Lambda1 * led.Lambda1 * led.omega2;
  led.theta3 = numer / denom;
  led.v_soc = 0.5 * led.theta3 * led.lambda;
  led.derived_filled = true;
  return led;
}

namespace {

double pair_distance(const TangentPair& a, const TangentPair& b, const SquareMesh& m,
                     double weight, double p) {
  const BoundaryCurve dg = BoundaryCurve::from_nodal(a.gamma.mesh, a.gamma.values - b.gamma.values);
  const BulkField dy = BulkField::from_nodal(m, a.y.values - b.y.values, FieldTag::zero_on_boundary);
  return pair_norm(dg, dy, weight, p);
}

}  // namespace

LipschitzReport measure_lipschitz(LipschitzKind kind, const ProblemData& data,
                                  const SolveConfig& cfg, int n_pairs, std::uint64_t seed) {
  LipschitzReport rep;
  rep.kind = kind;
  rep.n_pairs = n_pairs;

  const ConstantsLedger& led = cfg.ledger;
  const double uad = led.theta1 / (2.0 * led.alpha);
  const double weight = pair_weight(data.v, cfg);
  rep.pair_weight_used = weight;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  const int n_nodes = data.imesh.n_nodes();

  auto draw_control = [&](double max_norm) {
    ControlProfile u;
    u.mesh = data.imesh;
    u.values.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) u.values[i] = gauss(rng);
    const double n = std::sqrt(std::max(1e-300, profile_inner(u, u)));
    u.values *= max_norm * unif(rng) / n;
    return u;
  };
  const ControlProfile probe1 = draw_control(1.0);
  const ControlProfile probe2 = draw_control(1.0);
  const double pn1 = std::sqrt(profile_inner(probe1, probe1));
  const double pn2 = std::sqrt(profile_inner(probe2, probe2));

  for (int k = 0; k < n_pairs; ++k) {
    const ControlProfile u1 = draw_control(uad);
    const ControlProfile u2 = draw_control(uad);
    ControlProfile du = u1;
    du.values -= u2.values;
    const double dist = std::sqrt(std::max(0.0, profile_inner(du, du)));
    if (dist <= 1e-14) continue;

    const StatePair s1 = solve_state(u1, data.v, cfg).first;
    const StatePair s2 = solve_state(u2, data.v, cfg).first;
    double quotient = 0.0;
    if (kind == LipschitzKind::G) {
      quotient = pair_distance(TangentPair{s1.gamma, BulkField::from_nodal(
                                                         data.smesh, s1.y.values,
                                                         FieldTag::zero_on_boundary)},
                               TangentPair{s2.gamma, BulkField::from_nodal(
                                                         data.smesh, s2.y.values,
                                                         FieldTag::zero_on_boundary)},
                               data.smesh, weight, cfg.p) /
                 dist;
    } else {
      const LinearizedOperator op1(s1, data.v, cfg);
      const LinearizedOperator op2(s2, data.v, cfg);
      if (kind == LipschitzKind::Gprime) {
        const TangentPair t1 = apply_Gprime(op1, probe1);
        const TangentPair t2 = apply_Gprime(op2, probe1);
        quotient = pair_distance(t1, t2, data.smesh, weight, cfg.p) / (dist * pn1);
      } else {
        const TangentPair t1 = apply_Gsecond(op1, probe1, probe2);
        const TangentPair t2 = apply_Gsecond(op2, probe1, probe2);
        quotient = pair_distance(t1, t2, data.smesh, weight, cfg.p) / (dist * pn1 * pn2);
      }
    }
    rep.max_observed = std::max(rep.max_observed, quotient);
    ++rep.n_used;
  }

  if (kind == LipschitzKind::G) {
    const double L1 = 1.0 + led.beta * led.C_A;
    rep.reference = (led.alpha / led.theta2) * L1 * L1 * sobolev_norm_w1p(data.v, cfg.p);
  } else if (kind == LipschitzKind::Gprime) {
    rep.reference = led.L_Gprime;
  } else {
    rep.reference = led.L_Gsecond;
  }
  rep.reference_vacuous = rep.reference <= 0.0;
  rep.within_reference =
      !rep.reference_vacuous && rep.max_observed <= rep.reference * (1.0 + 1e-9);
  return rep;
}

namespace {

// int_a^b t^e dt with the logarithmic branch
double power_integral(double e, double a, double b) {
  if (std::abs(e + 1.0) < 1e-12) return std::log(b / a);
  return (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0);
}

}  // namespace

double gagliardo_seminorm_slopes(const std::vector<double>& slopes, double h, double s,
                                 double p) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("fractional order must sit in (0,1)");
  if (!(p > 1.0)) throw ConfigError("integrability order must exceed 1");
  if (!(h > 0.0)) throw ConfigError("cell width must be positive");
  const int n = static_cast<int>(slopes.size());
  const double mu = 1.0 + s * p;

  // kernel weight per element gap: the distance t = |x - y| between points of
  // cells g apart carries the triangular density h - |t - g h|, cut at t >= h
  std::vector<double> gap_weight(static_cast<size_t>(std::max(0, n)), 0.0);
  for (int g = 1; g < n; ++g) {
    double acc = 0.0;
    if (g == 1) {
      acc += 2.0 * h * power_integral(-mu, h, 2.0 * h) + power_integral(1.0 - mu, h, 2.0 * h) * -1.0;
    } else {
      acc += -(g - 1.0) * h * power_integral(-mu, (g - 1.0) * h, g * h) +
             power_integral(1.0 - mu, (g - 1.0) * h, g * h);
      acc += (g + 1.0) * h * power_integral(-mu, g * h, (g + 1.0) * h) -
             power_integral(1.0 - mu, g * h, (g + 1.0) * h);
    }
    gap_weight[static_cast<size_t>(g)] = acc;
  }

  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(slopes[static_cast<size_t>(i)] - slopes[static_cast<size_t>(j)]);
      if (d == 0.0) continue;
      total += 2.0 * std::pow(d, p) * gap_weight[static_cast<size_t>(j - i)];
    }
  return std::pow(total, 1.0 / p);
}

double gagliardo_seminorm(const BoundaryCurve& curve, double s, double p) {
  std::vector<double> slopes(static_cast<size_t>(curve.mesh.n));
  for (int e = 0; e < curve.mesh.n; ++e) slopes[static_cast<size_t>(e)] = curve.slope(e);
  return gagliardo_seminorm_slopes(slopes, curve.mesh.h(), s, p);
}

}  // namespace fbp
