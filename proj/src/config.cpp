#include "fbp/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace fbp {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "n_interval", "n_square",    "kappa",    "lambda",     "p",
      "v",          "gamma_d",     "y_d",      "u0",         "fp_tol",
      "fp_max_iter", "res_tol",    "eps_w",    "opt_tol",    "opt_max_iter",
      "opt_radius", "seed",        "n_samples", "out_dir",   "alpha",
      "beta",       "C_A",         "C_E",      "theta1",     "theta2",
      "L_Gprime",   "L_Gsecond"};
  return keys;
}

void take_number(const nlohmann::json& j, const char* key, double& slot,
                 std::vector<std::string>& bad) {
  if (!j.contains(key)) return;
  if (!j[key].is_number()) {
    bad.push_back(std::string(key) + ": expected a number");
    return;
  }
  slot = j[key].get<double>();
}

void take_int(const nlohmann::json& j, const char* key, int& slot,
              std::vector<std::string>& bad) {
  if (!j.contains(key)) return;
  if (!j[key].is_number_integer()) {
    bad.push_back(std::string(key) + ": expected an integer");
    return;
  }
  slot = j[key].get<int>();
}

// numeric value or the string "auto"
void take_auto(const nlohmann::json& j, const char* key, double& slot, bool& is_auto,
               std::vector<std::string>& bad) {
  if (!j.contains(key)) return;
  if (j[key].is_string()) {
    if (j[key].get<std::string>() == "auto") {
      is_auto = true;
      return;
    }
    bad.push_back(std::string(key) + ": expected a number or \"auto\"");
    return;
  }
  if (!j[key].is_number()) {
    bad.push_back(std::string(key) + ": expected a number or \"auto\"");
    return;
  }
  is_auto = false;
  slot = j[key].get<double>();
}

void take_expression(const nlohmann::json& j, const char* key, Expression& slot, bool allow_x2,
                     std::vector<std::string>& bad) {
  if (!j.contains(key)) return;
  if (!j[key].is_string()) {
    bad.push_back(std::string(key) + ": expected an expression string");
    return;
  }
  Expression e;
  try {
    e = Expression::parse(j[key].get<std::string>());
  } catch (const ConfigError& err) {
    bad.push_back(std::string(key) + ": " + err.what());
    return;
  }
  if (!allow_x2 && e.uses_x2()) {
    bad.push_back(std::string(key) + ": a one-dimensional field cannot reference x2");
    return;
  }
  // the evaluator must stay finite over the closed unit square
  for (int i = 0; i <= 8; ++i)
    for (int k = 0; k <= 8; ++k) {
      const double val = e.eval(i / 8.0, k / 8.0);
      if (!std::isfinite(val)) {
        bad.push_back(std::string(key) + ": evaluates to a non-finite value at (" +
                      std::to_string(i / 8.0) + ", " + std::to_string(k / 8.0) + ")");
        return;
      }
    }
  slot = e;
}

}  // namespace

RunConfig parse_config_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  std::vector<std::string> bad;
  for (const auto& item : j.items())
    if (known_keys().find(item.key()) == known_keys().end())
      bad.push_back("unknown key: " + item.key());

  RunConfig rc;
  rc.v_expr = Expression::parse("0");
  rc.gamma_d_expr = Expression::parse("0");
  rc.y_d_expr = Expression::parse("0");
  rc.u0_expr = Expression::parse("0");

  take_int(j, "n_interval", rc.n_interval, bad);
  rc.n_square = rc.n_interval;  // default follows the interval resolution
  take_int(j, "n_square", rc.n_square, bad);
  take_number(j, "kappa", rc.kappa, bad);
  take_number(j, "lambda", rc.lambda, bad);
  take_number(j, "p", rc.p, bad);
  take_expression(j, "v", rc.v_expr, true, bad);
  take_expression(j, "gamma_d", rc.gamma_d_expr, false, bad);
  take_expression(j, "y_d", rc.y_d_expr, true, bad);
  take_expression(j, "u0", rc.u0_expr, false, bad);
  take_number(j, "fp_tol", rc.fp_tol, bad);
  take_int(j, "fp_max_iter", rc.fp_max_iter, bad);
  take_number(j, "res_tol", rc.res_tol, bad);
  take_number(j, "eps_w", rc.eps_w, bad);
  take_number(j, "opt_tol", rc.opt_tol, bad);
  take_int(j, "opt_max_iter", rc.opt_max_iter, bad);
  take_number(j, "opt_radius", rc.opt_radius, bad);
  if (j.contains("seed")) {
    if (j["seed"].is_number_unsigned())
      rc.seed = j["seed"].get<std::uint64_t>();
    else if (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0)
      rc.seed = static_cast<std::uint64_t>(j["seed"].get<std::int64_t>());
    else
      bad.push_back("seed: expected a nonnegative integer");
  }
  take_int(j, "n_samples", rc.n_samples, bad);
  if (j.contains("out_dir")) {
    if (j["out_dir"].is_string())
      rc.out_dir = j["out_dir"].get<std::string>();
    else
      bad.push_back("out_dir: expected a string");
  }
  take_auto(j, "alpha", rc.alpha, rc.alpha_auto, bad);
  take_number(j, "beta", rc.beta, bad);
  take_number(j, "C_A", rc.C_A, bad);
  take_number(j, "C_E", rc.C_E, bad);
  take_auto(j, "theta1", rc.theta1, rc.theta1_auto, bad);
  take_number(j, "theta2", rc.theta2, bad);
  take_number(j, "L_Gprime", rc.L_Gprime, bad);
  take_number(j, "L_Gsecond", rc.L_Gsecond, bad);

  if (rc.n_interval < 2) bad.push_back("n_interval: must be at least 2");
  if (rc.n_square < 2) bad.push_back("n_square: must be at least 2");
  if (rc.n_interval != rc.n_square)
    bad.push_back("n_interval and n_square must match (the interface grid is the top edge)");
  if (!(rc.kappa > 0.0)) bad.push_back("kappa: must be positive");
  if (!(rc.lambda > 0.0)) bad.push_back("lambda: must be positive");
  if (!(rc.p > 2.0)) bad.push_back("p: must exceed 2");
  if (!(rc.fp_tol > 0.0)) bad.push_back("fp_tol: must be positive");
  if (rc.fp_max_iter < 1) bad.push_back("fp_max_iter: must be at least 1");
  if (!(rc.res_tol > 0.0)) bad.push_back("res_tol: must be positive");
  if (!(rc.eps_w > 0.0)) bad.push_back("eps_w: must be positive");
  if (!(rc.opt_tol > 0.0)) bad.push_back("opt_tol: must be positive");
  if (rc.opt_max_iter < 1) bad.push_back("opt_max_iter: must be at least 1");
  if (rc.opt_radius < 0.0) bad.push_back("opt_radius: must be nonnegative");
  if (rc.n_samples < 0) bad.push_back("n_samples: must be nonnegative");
  if (!(rc.beta > 0.0)) bad.push_back("beta: must be positive");
  if (!(rc.C_A > 0.0)) bad.push_back("C_A: must be positive");
  if (!(rc.C_E >= 1.0)) bad.push_back("C_E: must be at least 1");
  if (!rc.alpha_auto && !(rc.alpha > 0.0)) bad.push_back("alpha: must be positive");
  if (!(rc.theta2 > 0.0 && rc.theta2 < 1.0)) bad.push_back("theta2: must lie in (0,1)");
  if (!rc.theta1_auto) {
    const double low = rc.beta * rc.C_A / (1.0 + rc.beta * rc.C_A);
    if (!(rc.theta1 > low && rc.theta1 < 1.0))
      bad.push_back("theta1: must lie strictly between beta C_A/(1+beta C_A) and 1");
  }

  if (!bad.empty()) {
    std::string msg = "config validation failed:";
    for (const auto& b : bad) msg += "\n  - " + b;
    throw ConfigError(msg);
  }
  return rc;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config parse failed (" + path + "): " + e.what());
  }
  return parse_config_json(j);
}

SolveConfig make_solve_config(const RunConfig& rc) {
  SolveConfig c;
  c.kappa = rc.kappa;
  c.p = rc.p;
  c.fp_tol = rc.fp_tol;
  c.fp_max_iter = rc.fp_max_iter;
  c.res_tol = rc.res_tol;
  c.eps_w = rc.eps_w;

  ConstantsLedger& led = c.ledger;
  led.kappa = rc.kappa;
  led.lambda = rc.lambda;
  led.p = rc.p;
  led.q = rc.p / (rc.p - 1.0);
  led.alpha = rc.alpha_auto ? 2.0 / rc.kappa : rc.alpha;
  led.beta = rc.beta;
  led.C_A = rc.C_A;
  led.C_E = rc.C_E;
  led.theta2 = rc.theta2;
  if (rc.theta1_auto) {
    const double low = rc.beta * rc.C_A / (1.0 + rc.beta * rc.C_A);
    led.theta1 = 0.5 * (low + 1.0);
  } else {
    led.theta1 = rc.theta1;
  }
  led.L_Gprime = rc.L_Gprime;
  led.L_Gsecond = rc.L_Gsecond;
  led.derived_filled = false;
  return c;
}

ProblemData make_problem_data(const RunConfig& rc) {
  const Expression v = rc.v_expr, gd = rc.gamma_d_expr, yd = rc.y_d_expr;
  return ProblemData::make(
      rc.n_interval, rc.n_square,
      [v](double x1, double x2) { return v.eval(x1, x2); },
      [gd](double x1) { return gd.eval(x1); },
      [yd](double x1, double x2) { return yd.eval(x1, x2); }, rc.lambda);
}

nlohmann::ordered_json config_json(const RunConfig& rc) {
  nlohmann::ordered_json j;
  j["n_interval"] = rc.n_interval;
  j["n_square"] = rc.n_square;
  j["kappa"] = rc.kappa;
  j["lambda"] = rc.lambda;
  j["p"] = rc.p;
  j["v"] = rc.v_expr.source();
  j["gamma_d"] = rc.gamma_d_expr.source();
  j["y_d"] = rc.y_d_expr.source();
  j["u0"] = rc.u0_expr.source();
  j["fp_tol"] = rc.fp_tol;
  j["fp_max_iter"] = rc.fp_max_iter;
  j["res_tol"] = rc.res_tol;
  j["eps_w"] = rc.eps_w;
  j["opt_tol"] = rc.opt_tol;
  j["opt_max_iter"] = rc.opt_max_iter;
  j["opt_radius"] = rc.opt_radius;
  j["seed"] = rc.seed;
  j["n_samples"] = rc.n_samples;
  j["out_dir"] = rc.out_dir;
  j["alpha"] = rc.alpha_auto ? nlohmann::ordered_json("auto") : nlohmann::ordered_json(rc.alpha);
  j["beta"] = rc.beta;
  j["C_A"] = rc.C_A;
  j["C_E"] = rc.C_E;
  j["theta1"] =
      rc.theta1_auto ? nlohmann::ordered_json("auto") : nlohmann::ordered_json(rc.theta1);
  j["theta2"] = rc.theta2;
  j["L_Gprime"] = rc.L_Gprime;
  j["L_Gsecond"] = rc.L_Gsecond;
  return j;
}

nlohmann::ordered_json ledger_json(const ConstantsLedger& led) {
  nlohmann::ordered_json j;
  j["kappa"] = led.kappa;
  j["lambda"] = led.lambda;
  j["p"] = led.p;
  j["q"] = led.q;
  j["alpha"] = led.alpha;
  j["beta"] = led.beta;
  j["C_A"] = led.C_A;
  j["C_E"] = led.C_E;
  j["theta1"] = led.theta1;
  j["theta2"] = led.theta2;
  j["Lambda1"] = led.Lambda1;
  j["Lambda2"] = led.Lambda2;
  j["omega1"] = led.omega1;
  j["omega2"] = led.omega2;
  j["theta3"] = led.theta3;
  j["v_invariance"] = led.v_invariance;
  j["v_contraction"] = led.v_contraction;
  j["v_soc"] = led.v_soc;
  j["u_radius"] = led.u_radius;
  j["uad_radius"] = led.uad_radius;
  j["L_G"] = led.L_G;
  j["L_Gprime"] = led.L_Gprime;
  j["L_Gsecond"] = led.L_Gsecond;
  j["derived_filled"] = led.derived_filled;
  return j;
}

ConstantsLedger ledger_from_json(const nlohmann::json& j) {
  ConstantsLedger led;
  auto pick = [&](const char* key, double& slot) {
    if (j.contains(key) && j[key].is_number()) slot = j[key].get<double>();
  };
  pick("kappa", led.kappa);
  pick("lambda", led.lambda);
  pick("p", led.p);
  pick("q", led.q);
  pick("alpha", led.alpha);
  pick("beta", led.beta);
  pick("C_A", led.C_A);
  pick("C_E", led.C_E);
  pick("theta1", led.theta1);
  pick("theta2", led.theta2);
  pick("Lambda1", led.Lambda1);
  pick("Lambda2", led.Lambda2);
  pick("omega1", led.omega1);
  pick("omega2", led.omega2);
  pick("theta3", led.theta3);
  pick("v_invariance", led.v_invariance);
  pick("v_contraction", led.v_contraction);
  pick("v_soc", led.v_soc);
  pick("u_radius", led.u_radius);
  pick("uad_radius", led.uad_radius);
  pick("L_G", led.L_G);
  pick("L_Gprime", led.L_Gprime);
  pick("L_Gsecond", led.L_Gsecond);
  if (j.contains("derived_filled") && j["derived_filled"].is_boolean())
    led.derived_filled = j["derived_filled"].get<bool>();
  return led;
}

std::string format_sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path) {
  if (!out_) throw ConfigError("cannot open output file: " + path);
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_sig17(values[i]);
  }
  out_ << '\n';
}

}  // namespace fbp
