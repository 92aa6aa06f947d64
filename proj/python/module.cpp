#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fbp/adjoint.hpp"
#include "fbp/config.hpp"
#include "fbp/constants.hpp"
#include "fbp/control.hpp"
#include "fbp/state.hpp"

namespace py = pybind11;

namespace {

py::dict ledger_to_dict(const fbp::ConstantsLedger& led) {
  const auto j = fbp::ledger_json(led);
  py::dict d;
  for (const auto& item : j.items()) {
    if (item.value().is_boolean())
      d[item.key().c_str()] = item.value().get<bool>();
    else
      d[item.key().c_str()] = item.value().get<double>();
  }
  return d;
}

// bundles one configured problem instance; construction mirrors the CLI's
// JSON config so both front ends resolve identically
struct PyProblem {
  fbp::RunConfig rc;
  fbp::SolveConfig cfg;
  fbp::ProblemData data;

  explicit PyProblem(const std::string& json_text)
      : rc(fbp::parse_config_json(nlohmann::json::parse(json_text))),
        cfg(fbp::make_solve_config(rc)),
        data(fbp::make_problem_data(rc)) {
    cfg.ledger = fbp::compute_thresholds(cfg.ledger, fbp::measure_data_norms(data, cfg));
  }

  fbp::ControlProfile control(const Eigen::VectorXd& u) const {
    if (u.size() != data.imesh.n_nodes())
      throw std::invalid_argument("control vector must have n_interval + 1 entries");
    fbp::ControlProfile p;
    p.mesh = data.imesh;
    p.values = u;
    return p;
  }

  py::dict solve_state(const Eigen::VectorXd& u) const {
    const auto [st, tr] = fbp::solve_state(control(u), data.v, cfg);
    py::dict d;
    d["gamma"] = st.gamma.values;
    d["y"] = st.y.values;
    d["iterations"] = tr.iterations;
    d["converged"] = tr.converged;
    d["residual_bulk"] = tr.residual_bulk;
    d["residual_interface"] = tr.residual_interface;
    return d;
  }

  py::dict solve_adjoint(const Eigen::VectorXd& u) const {
    const auto st = fbp::solve_state(control(u), data.v, cfg).first;
    const auto [adj, tr] = fbp::solve_adjoint(st, data.v, data, cfg);
    py::dict d;
    d["s"] = adj.s.values;
    d["r"] = adj.r.values;
    d["iterations"] = tr.iterations;
    d["converged"] = tr.converged;
    return d;
  }

  double cost(const Eigen::VectorXd& u) const { return fbp::eval_cost(control(u), data, cfg); }

  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const {
    return fbp::eval_gradient(control(u), data, cfg).values;
  }

  double gradient_direction(const Eigen::VectorXd& u, const Eigen::VectorXd& h) const {
    return fbp::eval_gradient_direction(control(u), control(h), data, cfg);
  }

  double jsecond(const Eigen::VectorXd& u, const Eigen::VectorXd& h1,
                 const Eigen::VectorXd& h2) const {
    return fbp::eval_Jsecond(control(u), control(h1), control(h2), data, cfg);
  }

  py::dict optimize(const Eigen::VectorXd& u0, double tol, int max_iter, double radius) const {
    fbp::OptOptions opts;
    opts.opt_tol = tol > 0 ? tol : rc.opt_tol;
    opts.max_iter = max_iter > 0 ? max_iter : rc.opt_max_iter;
    opts.radius = radius;
    const fbp::OptResult res = fbp::optimize(data, cfg, control(u0), opts);
    py::dict d;
    d["u"] = res.u.values;
    d["cost"] = res.cost;
    d["iterations"] = res.iterations;
    d["converged"] = res.converged;
    d["vi_residual"] = res.vi_residual;
    d["cost_history"] = res.cost_history;
    return d;
  }

  py::dict verify_soc(const Eigen::VectorXd& u, int n_samples, std::uint64_t seed) const {
    const fbp::SocReport rep = fbp::verify_soc(control(u), data, cfg, n_samples, seed);
    py::dict d;
    d["min_ratio"] = rep.min_ratio;
    d["bound"] = rep.bound;
    d["curvature_ok"] = rep.curvature_ok;
    d["premise_ok"] = rep.premise_ok;
    d["at_boundary"] = rep.at_boundary;
    d["n_samples"] = rep.n_samples;
    return d;
  }

  py::dict quadratic_growth(const Eigen::VectorXd& u, int samples, std::uint64_t seed,
                            double stat_tol) const {
    const fbp::GrowthReport rep =
        fbp::check_quadratic_growth(control(u), data, cfg, samples, seed, stat_tol);
    py::dict d;
    d["largest_h_norm"] = rep.largest_h_norm;
    d["all_passed"] = rep.all_passed;
    d["n_samples"] = rep.n_samples;
    d["stationarity_residual"] = rep.stationarity_residual;
    d["stationarity_warned"] = rep.stationarity_warned;
    return d;
  }

  double estimate_beta_here() const {
    return fbp::estimate_beta(data.smesh, cfg.p, fbp::BoundaryCurve::zero(data.imesh));
  }

  double compute_CE_here(std::uint64_t seed) const {
    return fbp::compute_CE(data.smesh, cfg.p / (cfg.p - 1.0), seed);
  }

  Eigen::VectorXd interval_nodes() const {
    Eigen::VectorXd x(data.imesh.n_nodes());
    for (int i = 0; i < x.size(); ++i) x[i] = data.imesh.node(i);
    return x;
  }

  py::dict ledger() const { return ledger_to_dict(cfg.ledger); }
};

}  // namespace

PYBIND11_MODULE(_fbpopt, m) {
  m.doc() = "free-boundary control solver bindings";

  py::register_exception<fbp::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<fbp::SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<fbp::VerificationError>(m, "VerificationError", PyExc_RuntimeError);

  py::class_<PyProblem>(m, "Problem")
      .def(py::init<const std::string&>(), py::arg("config_json"))
      .def("solve_state", &PyProblem::solve_state, py::arg("u"))
      .def("solve_adjoint", &PyProblem::solve_adjoint, py::arg("u"))
      .def("cost", &PyProblem::cost, py::arg("u"))
      .def("gradient", &PyProblem::gradient, py::arg("u"))
      .def("gradient_direction", &PyProblem::gradient_direction, py::arg("u"), py::arg("h"))
      .def("jsecond", &PyProblem::jsecond, py::arg("u"), py::arg("h1"), py::arg("h2"))
      .def("optimize", &PyProblem::optimize, py::arg("u0"), py::arg("tol") = 0.0,
           py::arg("max_iter") = 0, py::arg("radius") = 0.0)
      .def("verify_soc", &PyProblem::verify_soc, py::arg("u"), py::arg("n_samples") = 50,
           py::arg("seed") = 42)
      .def("quadratic_growth", &PyProblem::quadratic_growth, py::arg("u"),
           py::arg("samples") = 50, py::arg("seed") = 42, py::arg("stat_tol") = 1e-6)
      .def("estimate_beta", &PyProblem::estimate_beta_here)
      .def("compute_CE", &PyProblem::compute_CE_here, py::arg("seed") = 42)
      .def("interval_nodes", &PyProblem::interval_nodes)
      .def("ledger", &PyProblem::ledger);

  m.def("analytic_CA", &fbp::analytic_CA, py::arg("grid") = 120);
  m.def("default_alpha", &fbp::default_alpha, py::arg("kappa"));
  m.def("gagliardo_seminorm_slopes", &fbp::gagliardo_seminorm_slopes, py::arg("slopes"),
        py::arg("h"), py::arg("s"), py::arg("p"));
}
