#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fbp/expression.hpp"
#include "fbp/problem.hpp"

namespace fbp {

// flat run configuration; every key optional, unknown keys rejected
struct RunConfig {
  int n_interval = 32;
  int n_square = 32;
  double kappa = 1.0;
  double lambda = 1.0;
  double p = 4.0;

  Expression v_expr;        // of x1, x2
  Expression gamma_d_expr;  // of x1 only
  Expression y_d_expr;      // of x1, x2 (physical coordinates)
  Expression u0_expr;       // of x1 only

  double fp_tol = 1e-11;
  int fp_max_iter = 200;
  double res_tol = 1e-9;
  double eps_w = 1e-8;
  double opt_tol = 1e-8;
  int opt_max_iter = 500;
  double opt_radius = 0.0;  // 0 = derive from the ledger

  std::uint64_t seed = 42;
  int n_samples = 0;  // 0 = per-command default
  std::string out_dir = "out";

  // ledger inputs; alpha and theta1 accept the string "auto"
  double alpha = 0.0;
  bool alpha_auto = true;
  double beta = 1.0;
  double C_A = 20.0;
  double C_E = 1.0;
  double theta1 = 0.0;
  bool theta1_auto = true;
  double theta2 = 0.5;
  double L_Gprime = 0.0;
  double L_Gsecond = 0.0;
};

// reads and validates a JSON config file; collects every violation into one
// ConfigError. parse problems carry the offending key or byte position
RunConfig parse_config(const std::string& path);
RunConfig parse_config_json(const nlohmann::json& j);

// resolved solver settings, ledger base included (alpha / theta1 resolved)
SolveConfig make_solve_config(const RunConfig& rc);
ProblemData make_problem_data(const RunConfig& rc);

// JSON echoes for reports; ordered so dumps are byte-stable
nlohmann::ordered_json config_json(const RunConfig& rc);
nlohmann::ordered_json ledger_json(const ConstantsLedger& led);
ConstantsLedger ledger_from_json(const nlohmann::json& j);

// comma-separated output, 17 significant digits, header row
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
};

std::string format_sig17(double v);

}  // namespace fbp
