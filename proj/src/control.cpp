#include "fbp/control.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "fbp/assembly.hpp"
#include "fbp/coefficient_map.hpp"
#include "fbp/quadrature.hpp"

namespace fbp {

namespace {

double l2_inner(const ControlProfile& a, const ControlProfile& b) { return profile_inner(a, b); }

double l2_norm(const ControlProfile& u) { return std::sqrt(std::max(0.0, l2_inner(u, u))); }

ControlProfile axpy(const ControlProfile& u, double t, const ControlProfile& d) {
  ControlProfile out = u;
  out.values += t * d.values;
  return out;
}

// int_I (gamma - gamma_d)^2, same rule as the load assembly
double interface_misfit(const BoundaryCurve& gamma, const Fn1& gamma_d) {
  const auto& im = gamma.mesh;
  double acc = 0.0;
  for (int e = 0; e < im.n; ++e) {
    for (const auto& pt : quad::gauss2(im.node(e), im.node(e + 1))) {
      const double d = gamma.value_at(pt.x) - gamma_d(pt.x);
      acc += pt.w * d * d;
    }
  }
  return acc;
}

BulkField total_field(const StatePair& st, const BulkField& v) {
  return BulkField::from_nodal(v.mesh, st.y.values + v.values, FieldTag::free);
}

double cost_given_state(const StatePair& st, const ControlProfile& u, const ProblemData& data) {
  const BulkField w = total_field(st, data.v);
  const double bulk = 0.5 * misfit_value(data.smesh, st.gamma, w, data.y_d);
  const double interface = 0.5 * interface_misfit(st.gamma, data.gamma_d);
  const double control = 0.5 * data.lambda * l2_inner(u, u);
  return bulk + interface + control;
}

// the two load vectors the cost's first derivative pairs tangent solutions
// against: the interface one is the r = 0 part of the adjoint load, the bulk
// one the weighted misfit against every hat
struct CostDerivative {
  Eigen::VectorXd interface;  // size n1 - 1
  Eigen::VectorXd bulk;       // all bulk nodes
};

CostDerivative cost_derivative(const StatePair& st, const ProblemData& data) {
  const BulkField w = total_field(st, data.v);
  const BulkField r0 = BulkField::zero(data.smesh, FieldTag::zero_on_fixed);
  CostDerivative out;
  out.interface = interface_load(data.imesh, eval_f0_f1(st, r0, data.v, data));
  out.bulk = misfit_load(data.smesh, st.gamma, w, data.y_d);
  return out;
}

// J''(u)[h1, h2] with the linearization and the first-derivative loads
// already in hand, so sweeps over many directions share one factorization
double jsecond_given_op(const LinearizedOperator& op, const CostDerivative& dJ,
                        const ProblemData& data, const ControlProfile& h1,
                        const ControlProfile& h2) {
  const auto t1 = op.solve(op.direction_rhs(h1)).first;
  const auto t2 = op.solve(op.direction_rhs(h2)).first;
  const auto t12 = op.solve(op.second_order_rhs(t1, t2)).first;

  // gamma_1 gamma_2 pairing is exact under the two-point rule
  double acc = profile_inner(Profile1D{data.imesh, t1.gamma.values},
                             Profile1D{data.imesh, t2.gamma.values});

  const Eigen::VectorXd& w_total = op.total_state();
  for_each_quad_point2(op.mesh(), op.base().gamma, [&](const QuadPoint2& qp) {
    const double y1q = field_value(qp, t1.y.values);
    const double y2q = field_value(qp, t2.y.values);
    const double g1q = t1.gamma.values[qp.hat_node[0]] * qp.hat_val[0] +
                       t1.gamma.values[qp.hat_node[1]] * qp.hat_val[1];
    const double g2q = t2.gamma.values[qp.hat_node[0]] * qp.hat_val[0] +
                       t2.gamma.values[qp.hat_node[1]] * qp.hat_val[1];
    const double one_plus = 1.0 + qp.coeff.gamma_val;
    const auto phys = map_psi(qp.x1, qp.x2, qp.coeff.gamma_val);
    const double diff = field_value(qp, w_total) - data.y_d(phys[0], phys[1]);
    acc += qp.w * (y1q * y2q * one_plus + diff * (y1q * g2q + y2q * g1q));
  });

  acc += dJ.interface.dot(t12.gamma.interior()) + dJ.bulk.dot(t12.y.values);
  acc += data.lambda * profile_inner(h1, h2);
  return acc;
}

struct RadialSplit {
  double radial = 0.0;  // <h, u>/<u, u>
  ControlProfile tangential;
};

RadialSplit split_radial(const ControlProfile& h, const ControlProfile& u, double unorm2) {
  RadialSplit out;
  out.radial = l2_inner(h, u) / unorm2;
  out.tangential = axpy(h, -out.radial, u);
  return out;
}

}  // namespace

double eval_cost(const ControlProfile& u, const ProblemData& data, const SolveConfig& cfg) {
  const auto st = solve_state(u, data.v, cfg).first;
  return cost_given_state(st, u, data);
}

ControlProfile eval_gradient(const ControlProfile& u, const ProblemData& data,
                             const SolveConfig& cfg) {
  const auto st = solve_state(u, data.v, cfg).first;
  const auto adj = solve_adjoint(st, data.v, data, cfg).first;
  ControlProfile g;
  g.mesh = u.mesh;
  g.values = data.lambda * u.values + adj.s.values;
  return g;
}

double eval_gradient_direction(const ControlProfile& u, const ControlProfile& h,
                               const ProblemData& data, const SolveConfig& cfg) {
  const auto st = solve_state(u, data.v, cfg).first;
  const LinearizedOperator op(st, data.v, cfg);
  const auto t = op.solve(op.direction_rhs(h)).first;
  const CostDerivative dJ = cost_derivative(st, data);
  return dJ.interface.dot(t.gamma.interior()) + dJ.bulk.dot(t.y.values) +
         data.lambda * l2_inner(u, h);
}

ControlProfile project_Uad(const ControlProfile& u, double radius) {
  if (radius < 0.0) throw ConfigError("projection radius must be nonnegative");
  const double n = l2_norm(u);
  if (n <= radius) return u;
  ControlProfile out = u;
  out.values *= radius / n;
  return out;
}

OptResult optimize(const ProblemData& data, const SolveConfig& cfg, const ControlProfile& u0,
                   const OptOptions& opts) {
  const ConstantsLedger& led = cfg.ledger;
  const double radius = opts.radius > 0.0 ? opts.radius : led.theta1 / (2.0 * led.alpha);
  const double lambda = data.lambda;
  if (lambda <= 0.0) throw ConfigError("lambda must be positive");

  OptResult res;
  ControlProfile u = project_Uad(u0, radius);

  auto eval_at = [&](const ControlProfile& uu) {
    const auto st = solve_state(uu, data.v, cfg).first;
    return std::make_pair(st, cost_given_state(st, uu, data));
  };
  auto gradient_at = [&](const ControlProfile& uu, const StatePair& st) {
    const auto adj = solve_adjoint(st, data.v, data, cfg).first;
    ControlProfile g;
    g.mesh = uu.mesh;
    g.values = lambda * uu.values + adj.s.values;
    return g;
  };
  auto vi_residual = [&](const ControlProfile& uu, const ControlProfile& g) {
    const ControlProfile trial = project_Uad(axpy(uu, -1.0 / lambda, g), radius);
    ControlProfile d = trial;
    d.values -= uu.values;
    return l2_norm(d);
  };

  auto [st, cost] = eval_at(u);
  ControlProfile g = gradient_at(u, st);

  ControlProfile u_best = u;
  double cost_best = cost;

  bool stalled = false;
  int accepted = 0;
  for (;;) {
    const double vi = vi_residual(u, g);
    res.cost_history.push_back(cost);
    res.grad_norm_history.push_back(l2_norm(g));
    res.vi_history.push_back(vi);
    if (cost < cost_best) {
      cost_best = cost;
      u_best = u;
    }
    if (vi <= opts.opt_tol) {
      res.converged = true;
      break;
    }
    if (accepted >= opts.max_iter || stalled) break;

    // backtracking on the projected-gradient arc, fixed sufficient-decrease slope
    double tau = 1.0 / lambda;
    bool took_step = false;
    for (int bt = 0; bt < 60; ++bt) {
      const ControlProfile cand = project_Uad(axpy(u, -tau, g), radius);
      ControlProfile d = cand;
      d.values -= u.values;
      const double along = l2_inner(g, d);
      const auto [st_c, cost_c] = eval_at(cand);
      if (cost_c <= cost + 1e-4 * along) {
        u = cand;
        st = st_c;
        cost = cost_c;
        took_step = true;
        break;
      }
      tau *= 0.5;
    }
    if (!took_step) {
      stalled = true;  // flat to line-search resolution; report the best point so far
      continue;
    }
    ++accepted;
    g = gradient_at(u, st);
  }

  if (cost <= cost_best) {
    cost_best = cost;
    u_best = u;
  }
  res.u = u_best;
  res.cost = cost_best;
  res.iterations = accepted;
  if (!res.converged) {
    // recompute the certificate at the returned point
    const auto [st_b, cost_b] = eval_at(u_best);
    (void)cost_b;
    res.vi_residual = vi_residual(u_best, gradient_at(u_best, st_b));
  } else {
    res.vi_residual = res.vi_history.back();
  }
  res.feasibility = check_admissibility(res.u, data.v, led);
  return res;
}

double eval_Jsecond(const ControlProfile& u, const ControlProfile& h1, const ControlProfile& h2,
                    const ProblemData& data, const SolveConfig& cfg) {
  const auto st = solve_state(u, data.v, cfg).first;
  const LinearizedOperator op(st, data.v, cfg);
  const CostDerivative dJ = cost_derivative(st, data);
  return jsecond_given_op(op, dJ, data, h1, h2);
}

SocReport verify_soc(const ControlProfile& u_bar, const ProblemData& data, const SolveConfig& cfg,
                     int n_samples, std::uint64_t seed) {
  if (!cfg.ledger.derived_filled)
    throw ConfigError("thresholds must be resolved before the curvature check");
  if (n_samples < 1) throw ConfigError("need at least one sample direction");

  SocReport rep;
  rep.bound = 0.5 * data.lambda;
  rep.v_norm = sobolev_norm_w1p(data.v, cfg.p);
  rep.v_soc_bound = cfg.ledger.v_soc;
  rep.premise_ok = rep.v_norm <= rep.v_soc_bound + 1e-15;

  const double radius = cfg.ledger.uad_radius;
  const double unorm = l2_norm(u_bar);
  rep.at_boundary = std::abs(unorm - radius) <= 1e-9 * std::max(1.0, radius);

  const auto st = solve_state(u_bar, data.v, cfg).first;
  const LinearizedOperator op(st, data.v, cfg);
  const CostDerivative dJ = cost_derivative(st, data);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n_nodes = u_bar.mesh.n_nodes();

  std::vector<ControlProfile> probes;
  auto draw = [&]() {
    ControlProfile h;
    h.mesh = u_bar.mesh;
    h.values.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) h.values[i] = gauss(rng);
    return h;
  };
  const double unorm2 = unorm * unorm;
  for (int k = 0; k < n_samples; ++k) {
    ControlProfile h = draw();
    if (rep.at_boundary && unorm2 > 0.0) {
      // admissible directions at the sphere must not point outward
      const RadialSplit sp = split_radial(h, u_bar, unorm2);
      if (sp.radial > 0.0) h = sp.tangential;
    }
    probes.push_back(std::move(h));
  }
  if (rep.at_boundary && unorm2 > 0.0) {
    // deterministic extremes of the cone: pure tangential and pure inward
    probes.push_back(split_radial(draw(), u_bar, unorm2).tangential);
    ControlProfile inward = u_bar;
    inward.values *= -1.0;
    probes.push_back(std::move(inward));
  }

  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& h : probes) {
    const double hn2 = l2_inner(h, h);
    if (hn2 <= 1e-28) continue;
    const double ratio = jsecond_given_op(op, dJ, data, h, h) / hn2;
    rep.ratios.push_back(ratio);
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    ++rep.n_samples;
  }
  rep.curvature_ok = rep.n_samples > 0 && rep.min_ratio >= rep.bound - 1e-12;
  return rep;
}

GrowthReport check_quadratic_growth(const ControlProfile& u_bar, const ProblemData& data,
                                    const SolveConfig& cfg, int samples, std::uint64_t seed,
                                    double stat_tol) {
  GrowthReport rep;
  const ConstantsLedger& led = cfg.ledger;
  const double radius = led.theta1 / (2.0 * led.alpha);
  const double lambda = data.lambda;

  const ControlProfile g0 = eval_gradient(u_bar, data, cfg);
  {
    ControlProfile trial = project_Uad(axpy(u_bar, -1.0 / lambda, g0), radius);
    trial.values -= u_bar.values;
    rep.stationarity_residual = l2_norm(trial);
  }
  rep.stationarity_warned = rep.stationarity_residual > stat_tol;
  rep.cost_at_ubar = eval_cost(u_bar, data, cfg);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  const int n_nodes = u_bar.mesh.n_nodes();

  bool all_ok = true;
  for (int k = 0; k < samples; ++k) {
    ControlProfile d;
    d.mesh = u_bar.mesh;
    d.values.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) d.values[i] = gauss(rng);
    const double dn = l2_norm(d);
    if (dn <= 1e-28) continue;
    const double scale = 0.1 * radius * unif(rng);
    d.values *= scale / dn;

    // step, then pull back to the admissible set so the tested increment is
    // a genuine feasible perturbation
    const ControlProfile u_s = project_Uad(axpy(u_bar, 1.0, d), radius);
    ControlProfile h = u_s;
    h.values -= u_bar.values;
    const double hn = l2_norm(h);
    if (hn <= 1e-14) continue;
    ++rep.n_samples;

    const double slack = 1e-12 * (1.0 + std::abs(rep.cost_at_ubar));
    const double cost_s = eval_cost(u_s, data, cfg);
    const bool growth = cost_s >= rep.cost_at_ubar + 0.125 * lambda * hn * hn - slack;

    ControlProfile dg = eval_gradient(u_s, data, cfg);
    dg.values -= g0.values;
    const bool monotone = l2_inner(dg, h) >= 0.25 * lambda * hn * hn - slack;

    if (growth && monotone) {
      rep.largest_h_norm = std::max(rep.largest_h_norm, hn);
    } else {
      all_ok = false;
    }
  }
  rep.all_passed = all_ok && rep.n_samples > 0;
  return rep;
}

}  // namespace fbp
