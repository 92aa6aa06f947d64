#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "fbp/config.hpp"
#include "fbp/constants.hpp"

using namespace fbp;
using nlohmann::json;

namespace {

// grab the full violation report, empty string if parsing went through
std::string violation_of(const json& j) {
  try {
    parse_config_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool mentions(const std::string& msg, const std::string& needle) {
  return msg.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("empty config resolves to the documented defaults") {
  const RunConfig rc = parse_config_json(json::object());
  CHECK(rc.n_interval == 32);
  CHECK(rc.n_square == 32);
  CHECK(rc.kappa == 1.0);
  CHECK(rc.lambda == 1.0);
  CHECK(rc.p == 4.0);
  CHECK(rc.fp_tol == 1e-11);
  CHECK(rc.fp_max_iter == 200);
  CHECK(rc.res_tol == 1e-9);
  CHECK(rc.eps_w == 1e-8);
  CHECK(rc.opt_tol == 1e-8);
  CHECK(rc.opt_max_iter == 500);
  CHECK(rc.opt_radius == 0.0);
  CHECK(rc.seed == 42);
  CHECK(rc.n_samples == 0);
  CHECK(rc.out_dir == "out");
  CHECK(rc.alpha_auto);
  CHECK(rc.beta == 1.0);
  CHECK(rc.C_A == 20.0);
  CHECK(rc.C_E == 1.0);
  CHECK(rc.theta1_auto);
  CHECK(rc.theta2 == 0.5);
  CHECK(rc.L_Gprime == 0.0);
  CHECK(rc.L_Gsecond == 0.0);
  CHECK(rc.v_expr.source() == "0");
  CHECK(rc.v_expr.eval(0.3, 0.7) == 0.0);
}

TEST_CASE("square resolution follows the interval resolution unless set") {
  const RunConfig rc = parse_config_json(json{{"n_interval", 8}});
  CHECK(rc.n_interval == 8);
  CHECK(rc.n_square == 8);
  CHECK(violation_of(json{{"n_interval", 8}, {"n_square", 8}}).empty());
  CHECK(mentions(violation_of(json{{"n_interval", 8}, {"n_square", 16}}), "must match"));
  CHECK(mentions(violation_of(json{{"n_interval", 1}}), "at least 2"));
}

TEST_CASE("unknown keys are named in the rejection") {
  const std::string msg = violation_of(json{{"n_intervals", 8}});
  CHECK(mentions(msg, "unknown key"));
  CHECK(mentions(msg, "n_intervals"));
}

TEST_CASE("all violations are collected into one report") {
  const std::string msg = violation_of(json{{"p", 2.0}, {"kappa", 0.0}, {"theta2", 1.0}});
  CHECK(mentions(msg, "p: must exceed 2"));
  CHECK(mentions(msg, "kappa: must be positive"));
  CHECK(mentions(msg, "theta2"));
}

TEST_CASE("expression fields are validated under their own key") {
  CHECK(mentions(violation_of(json{{"gamma_d", "x1 +"}}), "gamma_d"));
  CHECK(mentions(violation_of(json{{"gamma_d", "x2"}}), "cannot reference x2"));
  CHECK(mentions(violation_of(json{{"u0", "x2*x1"}}), "u0"));
  CHECK(mentions(violation_of(json{{"gamma_d", "frobnicate(x1)"}}), "gamma_d"));
  // the boundary datum lives on the square, x2 is legitimate there
  CHECK(violation_of(json{{"v", "x2"}}).empty());
  CHECK(violation_of(json{{"y_d", "x2*sin(pi*x1)"}}).empty());
  // 1/x1 blows up at the left edge of the probe lattice
  CHECK(mentions(violation_of(json{{"y_d", "1/x1"}}), "non-finite"));
  CHECK(mentions(violation_of(json{{"kappa", "hi"}}), "kappa: expected a number"));
  CHECK(mentions(violation_of(json{{"n_interval", 8.5}}), "n_interval: expected an integer"));
}

TEST_CASE("seed accepts nonnegative integers only") {
  CHECK(parse_config_json(json{{"seed", 7}}).seed == 7);
  json big;
  big["seed"] = (std::uint64_t{1} << 63);
  CHECK(parse_config_json(big).seed == (std::uint64_t{1} << 63));
  CHECK(mentions(violation_of(json{{"seed", -1}}), "seed: expected a nonnegative integer"));
  CHECK(mentions(violation_of(json{{"seed", 2.5}}), "seed"));
}

TEST_CASE("auto entries resolve when the solver config is built") {
  const SolveConfig sc = make_solve_config(parse_config_json(json::object()));
  CHECK(sc.ledger.alpha == 2.0);
  CHECK(sc.ledger.theta1 == 0.5 * (20.0 / 21.0 + 1.0));
  CHECK(sc.ledger.q == 4.0 / 3.0);
  CHECK(!sc.ledger.derived_filled);

  CHECK(make_solve_config(parse_config_json(json{{"kappa", 4.0}})).ledger.alpha == 0.5);
  CHECK(make_solve_config(parse_config_json(json{{"alpha", 3.0}})).ledger.alpha == 3.0);
  CHECK(make_solve_config(parse_config_json(json{{"theta1", 0.97}})).ledger.theta1 == 0.97);
  CHECK(parse_config_json(json{{"theta1", "auto"}}).theta1_auto);

  // 0.5 sits below beta C_A/(1+beta C_A) = 20/21 at the default constants
  CHECK(mentions(violation_of(json{{"theta1", 0.5}}), "theta1"));
  CHECK(mentions(violation_of(json{{"alpha", "nope"}}), "expected a number or \"auto\""));
}

TEST_CASE("exponent and extension-norm guards") {
  CHECK(mentions(violation_of(json{{"p", 2.0}}), "must exceed 2"));
  CHECK(violation_of(json{{"p", 2.5}}).empty());
  CHECK(mentions(violation_of(json{{"C_E", 0.5}}), "C_E: must be at least 1"));
}

TEST_CASE("config echo round trips byte for byte") {
  const RunConfig rc = parse_config_json(json{{"n_interval", 8}, {"v", "0.1*x2"}, {"seed", 9}});
  const std::string s1 = config_json(rc).dump(2);
  const RunConfig rc2 = parse_config_json(json::parse(s1));
  const std::string s2 = config_json(rc2).dump(2);
  CHECK(s1 == s2);
  CHECK(s1 == config_json(rc).dump(2));  // dumping twice changes nothing
}

TEST_CASE("ledger serialization keeps every entry exactly") {
  ConstantsLedger led;
  led.kappa = 1.0;
  led.lambda = 1.0;
  led.p = 4.0;
  led.q = 4.0 / 3.0;
  led.alpha = 1.0;
  led.beta = 1.0;
  led.C_A = 1.0;
  led.C_E = 1.0;
  led.theta1 = 0.6;
  led.theta2 = 0.5;
  compute_thresholds(led, DataNorms{});
  const auto j = ledger_json(led);
  const ConstantsLedger led2 = ledger_from_json(j);
  CHECK(led2.theta3 == led.theta3);
  CHECK(led2.v_invariance == led.v_invariance);
  CHECK(led2.v_contraction == led.v_contraction);
  CHECK(led2.v_soc == led.v_soc);
  CHECK(led2.u_radius == led.u_radius);
  CHECK(led2.uad_radius == led.uad_radius);
  CHECK(led2.Lambda1 == led.Lambda1);
  CHECK(led2.Lambda2 == led.Lambda2);
  CHECK(led2.omega1 == led.omega1);
  CHECK(led2.omega2 == led.omega2);
  CHECK(led2.L_G == led.L_G);
  CHECK(led2.q == led.q);
  CHECK(led2.derived_filled);
  // string form round trips too (the dump prints enough digits)
  const ConstantsLedger led3 = ledger_from_json(json::parse(j.dump()));
  CHECK(led3.theta3 == led.theta3);
}

TEST_CASE("seventeen significant digits survive the text format") {
  CHECK(format_sig17(0.1) == "0.10000000000000001");
  CHECK(format_sig17(5.0) == "5");
  CHECK(format_sig17(1.0 / 3.0) == "0.33333333333333331");
  const double samples[] = {3.141592653589793, 1e-30, -2.5e17, 0.3 + 1e-17};
  for (double x : samples) {
    const std::string s = format_sig17(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
}

TEST_CASE("csv rows carry full precision") {
  const std::string path = "csv_writer_check.tmp";
  {
    CsvWriter w(path, {"a", "b"});
    w.row({0.1, 2.0});
  }
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  in.close();
  std::remove(path.c_str());
  CHECK(header == "a,b");
  CHECK(row == "0.10000000000000001,2");
}

TEST_CASE("file-level problems carry the path") {
  CHECK_THROWS_AS(parse_config("/nonexistent/nope.json"), ConfigError);
  const std::string path = "broken_config_check.tmp";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  try {
    parse_config(path);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(mentions(e.what(), "parse failed"));
  }
  std::remove(path.c_str());
}

TEST_CASE("problem data samples the configured expressions") {
  const RunConfig rc = parse_config_json(json{{"n_interval", 4},
                                              {"v", "x2"},
                                              {"gamma_d", "x1*(1-x1)"},
                                              {"y_d", "0.5"},
                                              {"lambda", 0.25}});
  const ProblemData data = make_problem_data(rc);
  CHECK(data.lambda == 0.25);
  CHECK(data.gamma_d(0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(data.y_d(0.3, 0.4) == 0.5);
  const auto ref = BulkField::from_function(
      data.smesh, [](double, double x2) { return x2; }, FieldTag::free);
  CHECK((data.v.values - ref.values).cwiseAbs().maxCoeff() == 0.0);
}
