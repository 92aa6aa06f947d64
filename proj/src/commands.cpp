#include "fbp/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>

#include "fbp/adjoint.hpp"
#include "fbp/assembly.hpp"
#include "fbp/constants.hpp"
#include "fbp/control.hpp"
#include "fbp/state.hpp"
#include "fbp/tangent.hpp"

namespace fbp {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct Workspace {
  RunConfig rc;
  SolveConfig cfg;
  ProblemData data;
  ControlProfile u0;
  bool verbose = false;

  std::string path(const std::string& name) const {
    return (fs::path(rc.out_dir) / name).string();
  }
  void log(const std::string& msg) const {
    if (verbose) std::cerr << "[fbpopt] " << msg << "\n";
  }
};

Workspace make_workspace(const RunConfig& rc, bool verbose) {
  Workspace ws{rc, make_solve_config(rc), make_problem_data(rc), ControlProfile{}, verbose};
  const Expression u0e = rc.u0_expr;
  ws.u0 = ControlProfile::from_function(ws.data.imesh, [u0e](double x) { return u0e.eval(x); });
  // thresholds are cheap; resolving them up front gives every summary the
  // full derived block
  ws.cfg.ledger = compute_thresholds(ws.cfg.ledger, measure_data_norms(ws.data, ws.cfg));
  return ws;
}

ojson feasibility_json(const FeasibilityReport& f) {
  ojson j;
  j["v_norm"] = f.v_norm;
  j["v_invariance_bound"] = f.v_invariance_bound;
  j["v_contraction_bound"] = f.v_contraction_bound;
  j["u_norm"] = f.u_norm;
  j["u_radius"] = f.u_radius;
  j["uad_radius"] = f.uad_radius;
  j["invariance_ok"] = f.invariance_ok;
  j["contraction_ok"] = f.contraction_ok;
  j["u_in_U"] = f.u_in_U;
  j["u_in_Uad"] = f.u_in_Uad;
  j["all_ok"] = f.all_ok;
  return j;
}

ojson trace_json(const FixedPointTrace& t) {
  ojson j;
  j["iterations"] = t.iterations;
  j["converged"] = t.converged;
  j["residual_bulk"] = t.residual_bulk;
  j["residual_interface"] = t.residual_interface;
  j["residual_ok"] = t.residual_ok;
  j["feasibility_warned"] = t.feasibility_warned;
  j["state_constraint_ok"] = t.state_constraint_ok;
  j["iterates_in_ball"] = t.iterates_in_ball;
  return j;
}

void write_summary(const Workspace& ws, const std::string& command, const ojson& results) {
  ojson j;
  j["command"] = command;
  j["config"] = config_json(ws.rc);
  j["ledger"] = ledger_json(ws.cfg.ledger);
  j["results"] = results;
  std::ofstream out(ws.path("summary.json"));
  if (!out) throw ConfigError("cannot open output file: " + ws.path("summary.json"));
  out << j.dump(2) << "\n";
}

void write_trace_csv(const Workspace& ws, const std::string& name, const FixedPointTrace& t) {
  CsvWriter csv(ws.path(name), {"iter", "step_norm", "ratio"});
  for (size_t k = 0; k < t.step_norms.size(); ++k)
    csv.row({static_cast<double>(k), t.step_norms[k], k == 0 ? 0.0 : t.ratios[k - 1]});
}

void write_state_csv(const Workspace& ws, const StatePair& st) {
  const SquareMesh& m = ws.data.smesh;
  CsvWriter csv(ws.path("state.csv"), {"i", "j", "x1", "x2", "gamma", "y", "v", "w"});
  for (int j = 0; j <= m.n2; ++j)
    for (int i = 0; i <= m.n1; ++i) {
      const int id = m.node_index(i, j);
      const double y = st.y.values[id], v = ws.data.v.values[id];
      csv.row({static_cast<double>(i), static_cast<double>(j), i * m.h1(), j * m.h2(),
               st.gamma.values[i], y, v, y + v});
    }
}

void write_adjoint_csv(const Workspace& ws, const AdjointPair& adj) {
  const SquareMesh& m = ws.data.smesh;
  CsvWriter csv(ws.path("adjoint.csv"), {"i", "j", "x1", "x2", "s", "r"});
  for (int j = 0; j <= m.n2; ++j)
    for (int i = 0; i <= m.n1; ++i)
      csv.row({static_cast<double>(i), static_cast<double>(j), i * m.h1(), j * m.h2(),
               adj.s.values[i], adj.r.values[m.node_index(i, j)]});
}

ControlProfile random_direction(const IntervalMesh& im, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ControlProfile h;
  h.mesh = im;
  h.values.resize(im.n_nodes());
  for (int i = 0; i < h.values.size(); ++i) h.values[i] = gauss(rng);
  const double n = std::sqrt(std::max(1e-300, profile_inner(h, h)));
  h.values /= n;
  return h;
}

// least-squares slope of log(val) against log(eps); pairs with val <= floor
// are dropped (exact-zero remainders from linear cases)
double loglog_slope(const std::vector<std::pair<double, double>>& pts, double floor_val) {
  std::vector<std::pair<double, double>> keep;
  for (const auto& [e, v] : pts)
    if (v > floor_val) keep.push_back({std::log(e), std::log(v)});
  if (keep.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : keep) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(keep.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_solve_state(const Workspace& ws) {
  auto [st, tr] = solve_state(ws.u0, ws.data.v, ws.cfg);
  const auto [res_bulk, res_int] = state_residuals(st, ws.u0, ws.data.v, ws.cfg.kappa);
  const FeasibilityReport feas = check_admissibility(ws.u0, ws.data.v, ws.cfg.ledger);
  write_state_csv(ws, st);
  write_trace_csv(ws, "trace.csv", tr);

  ojson r;
  r["trace"] = trace_json(tr);
  r["residual_bulk"] = res_bulk;
  r["residual_interface"] = res_int;
  r["gamma_w1inf"] = compute_norm(NormKind::W1inf0(), st.gamma);
  r["y_w1p"] = compute_norm(NormKind::W1p0(ws.cfg.p), st.y);
  r["pair_weight"] = pair_weight(ws.data.v, ws.cfg);
  r["cost"] = eval_cost(ws.u0, ws.data, ws.cfg);
  r["feasibility"] = feasibility_json(feas);
  write_summary(ws, "solve-state", r);
  return 0;
}

int cmd_solve_adjoint(const Workspace& ws) {
  auto [st, tr] = solve_state(ws.u0, ws.data.v, ws.cfg);
  auto [adj, atr] = solve_adjoint(st, ws.data.v, ws.data, ws.cfg);
  write_state_csv(ws, st);
  write_adjoint_csv(ws, adj);
  write_trace_csv(ws, "trace.csv", atr);

  ojson r;
  r["state_trace"] = trace_json(tr);
  r["adjoint_trace"] = trace_json(atr);
  r["s_l2"] = compute_norm(NormKind::L2(), adj.s);
  r["s_w1inf"] = compute_norm(NormKind::W1inf0(), adj.s);
  ControlProfile g;
  g.mesh = ws.data.imesh;
  g.values = ws.data.lambda * ws.u0.values + adj.s.values;
  r["gradient_l2"] = std::sqrt(std::max(0.0, profile_inner(g, g)));
  write_summary(ws, "solve-adjoint", r);
  return 0;
}

int cmd_optimize(const Workspace& ws) {
  OptOptions opts;
  opts.opt_tol = ws.rc.opt_tol;
  opts.max_iter = ws.rc.opt_max_iter;
  opts.radius = ws.rc.opt_radius;
  const OptResult res = optimize(ws.data, ws.cfg, ws.u0, opts);

  {
    CsvWriter csv(ws.path("optimize.csv"), {"iter", "cost", "grad_norm", "vi_residual"});
    for (size_t k = 0; k < res.cost_history.size(); ++k)
      csv.row({static_cast<double>(k), res.cost_history[k], res.grad_norm_history[k],
               res.vi_history[k]});
  }
  {
    const ControlProfile g = eval_gradient(res.u, ws.data, ws.cfg);
    CsvWriter csv(ws.path("control.csv"), {"i", "x1", "u0", "u", "gradient"});
    for (int i = 0; i < res.u.values.size(); ++i)
      csv.row({static_cast<double>(i), ws.data.imesh.node(i), ws.u0.values[i], res.u.values[i],
               g.values[i]});
  }
  write_state_csv(ws, solve_state(res.u, ws.data.v, ws.cfg).first);

  ojson r;
  r["cost"] = res.cost;
  r["iterations"] = res.iterations;
  r["converged"] = res.converged;
  r["vi_residual"] = res.vi_residual;
  r["feasibility"] = feasibility_json(res.feasibility);
  write_summary(ws, "optimize", r);
  return 0;
}

int cmd_check_gradient(const Workspace& ws) {
  const std::vector<double> ladder = {1e-2, 1e-3, 1e-4};
  const int n_dirs = ws.rc.n_samples > 0 ? ws.rc.n_samples : 3;
  std::mt19937_64 rng(ws.rc.seed);

  CsvWriter csv(ws.path("gradient_check.csv"),
                {"direction", "eps", "fd_value", "pairing", "rel_error"});
  bool ok = true;
  std::vector<double> worst(ladder.size(), 0.0);
  const ControlProfile g = eval_gradient(ws.u0, ws.data, ws.cfg);
  for (int d = 0; d < n_dirs; ++d) {
    const ControlProfile h = random_direction(ws.data.imesh, rng);
    const double pairing = profile_inner(g, h);
    for (size_t li = 0; li < ladder.size(); ++li) {
      const double eps = ladder[li];
      ControlProfile up = ws.u0, dn = ws.u0;
      up.values += eps * h.values;
      dn.values -= eps * h.values;
      const double fd =
          (eval_cost(up, ws.data, ws.cfg) - eval_cost(dn, ws.data, ws.cfg)) / (2.0 * eps);
      const double rel = std::abs(fd - pairing) / std::max(std::abs(pairing), 1e-14);
      worst[li] = std::max(worst[li], rel);
      csv.row({static_cast<double>(d), eps, fd, pairing, rel});
      if (eps == 1e-3 && rel > 1e-4) ok = false;
    }
  }

  std::vector<std::pair<double, double>> pts;
  for (size_t li = 0; li < ladder.size(); ++li) pts.push_back({ladder[li], worst[li]});
  const double order = loglog_slope(pts, 1e-13);

  ojson r;
  r["directions"] = n_dirs;
  r["worst_rel_error_mid_eps"] = worst[1];
  r["observed_order"] = std::isnan(order) ? ojson("exact") : ojson(order);
  r["passed"] = ok;
  write_summary(ws, "check-gradient", r);
  return ok ? 0 : 3;
}

int cmd_check_contraction(const Workspace& ws) {
  const int n = ws.rc.n_samples > 0 ? ws.rc.n_samples : 100;
  const ConstantsLedger& led = ws.cfg.ledger;
  const FeasibilityReport feas = check_admissibility(ws.u0, ws.data.v, led);

  ojson r;
  r["feasibility"] = feasibility_json(feas);
  if (!(feas.invariance_ok && feas.contraction_ok && feas.u_in_U)) {
    r["passed"] = false;
    r["note"] = "premises fail for this data; the contraction claim is not certified";
    write_summary(ws, "check-contraction", r);
    return 3;
  }

  const double weight = pair_weight(ws.data.v, ws.cfg);
  const double gamma_ball = 0.9 * led.theta1;
  const double y_ball = led.beta * led.C_A * sobolev_norm_w1p(ws.data.v, ws.cfg.p);
  const double target = 1.0 - led.theta2;

  std::mt19937_64 rng(ws.rc.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  const IntervalMesh& im = ws.data.imesh;
  const SquareMesh& sm = ws.data.smesh;
  const auto keep = unconstrained_nodes(sm, FieldTag::zero_on_boundary);

  auto draw_pair_point = [&]() {
    Eigen::VectorXd gi(im.n - 1);
    for (int i = 0; i < gi.size(); ++i) gi[i] = gauss(rng);
    BoundaryCurve gam = BoundaryCurve::from_interior(im, gi);
    const double gn = compute_norm(NormKind::W1inf0(), gam);
    if (gn > 0.0) gam = BoundaryCurve::from_interior(im, gi * (gamma_ball * unif(rng) / gn));

    Eigen::VectorXd full = Eigen::VectorXd::Zero(sm.n_nodes());
    for (int idx : keep) full[idx] = gauss(rng);
    BulkField y = BulkField::from_nodal(sm, full, FieldTag::zero_on_boundary);
    const double yn = compute_norm(NormKind::W1p0(ws.cfg.p), y);
    if (yn > 0.0 && y_ball > 0.0)
      y = BulkField::from_nodal(sm, full * (y_ball * unif(rng) / yn),
                                FieldTag::zero_on_boundary);
    else
      y = BulkField::from_nodal(sm, Eigen::VectorXd::Zero(sm.n_nodes()),
                                FieldTag::zero_on_boundary);
    return StatePair{gam, y};
  };

  auto apply_T = [&](const StatePair& a) {
    const BoundaryCurve gnew = apply_T1(a.gamma, a.y, ws.u0, ws.data.v, ws.cfg.kappa);
    return StatePair{gnew, apply_T2(gnew, ws.data.v)};
  };

  CsvWriter csv(ws.path("contraction.csv"), {"sample", "dist_before", "dist_after", "ratio"});
  bool ok = true;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const StatePair a = draw_pair_point();
    const StatePair b = draw_pair_point();
    const double d0 =
        pair_norm(BoundaryCurve::from_nodal(im, a.gamma.values - b.gamma.values),
                  BulkField::from_nodal(sm, a.y.values - b.y.values, FieldTag::zero_on_boundary),
                  weight, ws.cfg.p);
    if (d0 <= 1e-14) continue;
    const StatePair Ta = apply_T(a);
    const StatePair Tb = apply_T(b);
    const double d1 =
        pair_norm(BoundaryCurve::from_nodal(im, Ta.gamma.values - Tb.gamma.values),
                  BulkField::from_nodal(sm, Ta.y.values - Tb.y.values, FieldTag::zero_on_boundary),
                  weight, ws.cfg.p);
    const double ratio = d1 / d0;
    worst = std::max(worst, ratio);
    if (ratio > target + 1e-12) ok = false;
    csv.row({static_cast<double>(k), d0, d1, ratio});
  }

  // the solver's own trace must contract geometrically as well
  const auto tr = solve_state(ws.u0, ws.data.v, ws.cfg).second;
  double worst_trace = 0.0;
  for (size_t k = 0; k + 1 < tr.step_norms.size(); ++k) {
    if (tr.step_norms[k + 1] <= 1e-13) continue;
    worst_trace = std::max(worst_trace, tr.ratios[k]);
    if (tr.ratios[k] > target + 1e-12) ok = false;
  }

  r["samples"] = n;
  r["worst_pair_ratio"] = worst;
  r["worst_trace_ratio"] = worst_trace;
  r["contraction_target"] = target;
  r["passed"] = ok;
  write_summary(ws, "check-contraction", r);
  return ok ? 0 : 3;
}

int cmd_check_frechet(const Workspace& ws) {
  const std::vector<double> ladder = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  std::mt19937_64 rng(ws.rc.seed);
  const ControlProfile h = random_direction(ws.data.imesh, rng);

  CsvWriter csv(ws.path("frechet.csv"), {"order", "eps", "remainder", "ratio"});
  bool ok = true;
  ojson r;
  for (int order = 1; order <= 2; ++order) {
    const FrechetTable tab = verify_frechet(ws.u0, h, ws.data.v, order, ladder, ws.cfg);
    std::vector<std::pair<double, double>> pts;
    bool all_tiny = true;
    for (const auto& row : tab.rows) {
      csv.row({static_cast<double>(order), row.eps, row.remainder, row.ratio});
      pts.push_back({row.eps, row.remainder});
      if (row.remainder > 1e-12 * std::max(1.0, tab.h_norm)) all_tiny = false;
    }
    const std::string key = order == 1 ? "order1" : "order2";
    if (all_tiny) {
      r[key + "_slope"] = "exact";
    } else {
      const double slope = loglog_slope(pts, 1e-15);
      r[key + "_slope"] = slope;
      if (!(slope >= 1.9)) ok = false;
    }
  }
  r["passed"] = ok;
  write_summary(ws, "check-frechet", r);
  return ok ? 0 : 3;
}

int cmd_verify_soc(const Workspace& ws) {
  OptOptions opts;
  opts.opt_tol = ws.rc.opt_tol;
  opts.max_iter = ws.rc.opt_max_iter;
  opts.radius = ws.rc.opt_radius;
  const OptResult res = optimize(ws.data, ws.cfg, ws.u0, opts);

  const int n = ws.rc.n_samples > 0 ? ws.rc.n_samples : 50;
  const SocReport soc = verify_soc(res.u, ws.data, ws.cfg, n, ws.rc.seed);
  const GrowthReport growth =
      check_quadratic_growth(res.u, ws.data, ws.cfg, n, ws.rc.seed + 1, ws.rc.opt_tol * 100);

  CsvWriter csv(ws.path("soc.csv"), {"sample", "rayleigh_ratio"});
  for (size_t k = 0; k < soc.ratios.size(); ++k)
    csv.row({static_cast<double>(k), soc.ratios[k]});

  ojson r;
  r["optimizer_converged"] = res.converged;
  r["vi_residual"] = res.vi_residual;
  r["min_ratio"] = soc.min_ratio;
  r["curvature_bound"] = soc.bound;
  r["curvature_ok"] = soc.curvature_ok;
  r["at_boundary"] = soc.at_boundary;
  r["v_norm"] = soc.v_norm;
  r["v_soc_bound"] = soc.v_soc_bound;
  r["premise_ok"] = soc.premise_ok;
  ojson gj;
  gj["largest_h_norm"] = growth.largest_h_norm;
  gj["all_passed"] = growth.all_passed;
  gj["n_samples"] = growth.n_samples;
  gj["stationarity_residual"] = growth.stationarity_residual;
  gj["stationarity_warned"] = growth.stationarity_warned;
  r["quadratic_growth"] = gj;
  const bool ok = soc.curvature_ok && growth.all_passed;
  r["passed"] = ok;
  write_summary(ws, "verify-soc", r);
  return ok ? 0 : 3;
}

int cmd_estimate_constants(Workspace ws) {
  ws.log("scanning coefficient bound");
  const double ca_scan = analytic_CA(120);
  const double alpha_def = default_alpha(ws.rc.kappa);
  ws.log("running bulk inf-sup power iteration");
  const double beta_est =
      estimate_beta(ws.data.smesh, ws.cfg.p, BoundaryCurve::zero(ws.data.imesh));
  const double q = ws.cfg.p / (ws.cfg.p - 1.0);
  ws.log("measuring extension norm");
  const double ce_est = compute_CE(ws.data.smesh, q, ws.rc.seed);
  const DataNorms norms = measure_data_norms(ws.data, ws.cfg);

  ojson measured;
  measured["C_A_scan"] = ca_scan;
  measured["alpha_default"] = alpha_def;
  measured["beta_estimate"] = beta_est;
  measured["C_E_estimate"] = ce_est;
  ojson dn;
  dn["gamma_d_l2"] = norms.gamma_d_l2;
  dn["y_d_l2"] = norms.y_d_l2;
  dn["v_w1p"] = norms.v_w1p;

  // a second ledger resolved from the measurements, so the configured and
  // measured pictures sit side by side
  ojson from_measured;
  try {
    ConstantsLedger base = make_solve_config(ws.rc).ledger;
    base.C_A = ca_scan;
    base.beta = beta_est;
    base.C_E = ce_est;
    if (ws.rc.alpha_auto) base.alpha = alpha_def;
    if (ws.rc.theta1_auto) {
      const double low = base.beta * base.C_A / (1.0 + base.beta * base.C_A);
      base.theta1 = 0.5 * (low + 1.0);
    }
    from_measured = ledger_json(compute_thresholds(base, norms));
  } catch (const ConfigError& e) {
    from_measured = ojson{{"error", e.what()}};
  }

  ojson r;
  r["measured"] = measured;
  r["data_norms"] = dn;
  r["ledger_from_measured"] = from_measured;
  write_summary(ws, "estimate-constants", r);

  std::ofstream out(ws.path("constants.json"));
  if (!out) throw ConfigError("cannot open output file: " + ws.path("constants.json"));
  ojson cj;
  cj["measured"] = measured;
  cj["data_norms"] = dn;
  cj["ledger"] = ledger_json(ws.cfg.ledger);
  cj["ledger_from_measured"] = from_measured;
  out << cj.dump(2) << "\n";
  return 0;
}

int cmd_report(const Workspace& ws) {
  auto [st, tr] = solve_state(ws.u0, ws.data.v, ws.cfg);
  auto [adj, atr] = solve_adjoint(st, ws.data.v, ws.data, ws.cfg);
  const auto [res_bulk, res_int] = state_residuals(st, ws.u0, ws.data.v, ws.cfg.kappa);
  write_state_csv(ws, st);
  write_adjoint_csv(ws, adj);

  const double q = ws.cfg.p / (ws.cfg.p - 1.0);
  const double s_frac = 1.0 / q;
  const double semi_here = gagliardo_seminorm(st.gamma, s_frac, ws.cfg.p);

  // mesh-doubled rerun for the regularity drift diagnostic
  RunConfig rc2 = ws.rc;
  rc2.n_interval *= 2;
  rc2.n_square *= 2;
  const SolveConfig cfg2 = make_solve_config(rc2);
  const ProblemData data2 = make_problem_data(rc2);
  const Expression u0e = ws.rc.u0_expr;
  const ControlProfile u02 =
      ControlProfile::from_function(data2.imesh, [u0e](double x) { return u0e.eval(x); });
  const StatePair st2 = solve_state(u02, data2.v, cfg2).first;
  const double semi_fine = gagliardo_seminorm(st2.gamma, s_frac, cfg2.p);
  const double drift =
      semi_here > 1e-300 ? std::abs(semi_fine - semi_here) / semi_here : 0.0;

  ojson lip;
  for (auto [kind, name] : {std::pair<LipschitzKind, const char*>{LipschitzKind::G, "G"},
                            {LipschitzKind::Gprime, "Gprime"},
                            {LipschitzKind::Gsecond, "Gsecond"}}) {
    const LipschitzReport rep = measure_lipschitz(kind, ws.data, ws.cfg, 5, ws.rc.seed);
    ojson j;
    j["n_used"] = rep.n_used;
    j["max_observed"] = rep.max_observed;
    j["reference"] = rep.reference;
    j["reference_vacuous"] = rep.reference_vacuous;
    j["within_reference"] = rep.within_reference;
    j["pair_weight_used"] = rep.pair_weight_used;
    lip[name] = j;
  }

  ojson r;
  r["state_trace"] = trace_json(tr);
  r["adjoint_trace"] = trace_json(atr);
  r["residual_bulk"] = res_bulk;
  r["residual_interface"] = res_int;
  r["cost"] = eval_cost(ws.u0, ws.data, ws.cfg);
  r["gamma_w1inf"] = compute_norm(NormKind::W1inf0(), st.gamma);
  r["y_w1p"] = compute_norm(NormKind::W1p0(ws.cfg.p), st.y);
  r["feasibility"] = feasibility_json(check_admissibility(ws.u0, ws.data.v, ws.cfg.ledger));
  ojson reg;
  reg["order"] = s_frac;
  reg["exponent"] = ws.cfg.p;
  reg["seminorm"] = semi_here;
  reg["seminorm_doubled_mesh"] = semi_fine;
  reg["relative_drift"] = drift;
  r["regularity"] = reg;
  r["lipschitz"] = lip;
  write_summary(ws, "report", r);

  std::ofstream out(ws.path("report.json"));
  if (!out) throw ConfigError("cannot open output file: " + ws.path("report.json"));
  ojson full;
  full["command"] = "report";
  full["config"] = config_json(ws.rc);
  full["ledger"] = ledger_json(ws.cfg.ledger);
  full["results"] = r;
  out << full.dump(2) << "\n";
  return 0;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "solve-state",      "solve-adjoint", "optimize",
      "check-gradient",   "check-contraction", "check-frechet",
      "verify-soc",       "estimate-constants", "report"};
  return names;
}

int run_command(const std::string& cmd, const RunConfig& rc, bool verbose) {
  std::error_code ec;
  fs::create_directories(rc.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + rc.out_dir);

  Workspace ws = make_workspace(rc, verbose);
  ws.log("running " + cmd + " into " + rc.out_dir);
  if (cmd == "solve-state") return cmd_solve_state(ws);
  if (cmd == "solve-adjoint") return cmd_solve_adjoint(ws);
  if (cmd == "optimize") return cmd_optimize(ws);
  if (cmd == "check-gradient") return cmd_check_gradient(ws);
  if (cmd == "check-contraction") return cmd_check_contraction(ws);
  if (cmd == "check-frechet") return cmd_check_frechet(ws);
  if (cmd == "verify-soc") return cmd_verify_soc(ws);
  if (cmd == "estimate-constants") return cmd_estimate_constants(ws);
  if (cmd == "report") return cmd_report(ws);
  throw ConfigError("unknown command: " + cmd);
}

}  // namespace fbp
