#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mfg/config.hpp"
#include "mfg/diagnostics.hpp"
#include "mfg/model.hpp"
#include "mfg/oracle.hpp"
#include "mfg/solver.hpp"

namespace py = pybind11;
using namespace mfg;

namespace {

py::array_t<double> field_to_array(const SpaceTimeField& f) {
  const auto& g = f.grid;
  py::array_t<double> out({g.Nt + 1, g.n_space()});
  auto buf = out.mutable_unchecked<2>();
  for (int j = 0; j <= g.Nt; ++j)
    for (int i = 0; i < g.n_space(); ++i) buf(j, i) = f.at(i, j);
  return out;
}

SpaceTimeField array_to_field(const py::array_t<double>& a, const GridSpec& g) {
  if (a.ndim() != 2 || a.shape(0) != g.Nt + 1 || a.shape(1) != g.n_space())
    throw py::value_error("field shape must be (Nt + 1, n_space)");
  SpaceTimeField f(g);
  auto buf = a.unchecked<2>();
  for (int j = 0; j <= g.Nt; ++j)
    for (int i = 0; i < g.n_space(); ++i) f.at(i, j) = buf(j, i);
  return f;
}

py::dict report_to_dict(const DiagnosticsReport& rep) {
  py::list checks;
  for (const auto& e : rep.entries) {
    py::dict c;
    c["id"] = e.id;
    c["applicable"] = e.applicable;
    c["gating"] = e.gating;
    c["pass"] = e.pass;
    c["measured"] = e.measured;
    c["bound"] = e.bound;
    c["tol"] = e.tol;
    c["note"] = e.note;
    checks.append(c);
  }
  py::dict out;
  out["epsilon"] = rep.epsilon;
  out["all_pass"] = rep.all_pass();
  out["checks"] = checks;
  return out;
}

py::dict grid_to_dict(const GridSpec& g) {
  py::dict d;
  d["dim"] = g.dim;
  d["Nx"] = g.Nx;
  d["Nt"] = g.Nt;
  d["T"] = g.T;
  return d;
}

py::dict py_solve(const std::string& config_json) {
  const RunConfig cfg = parse_config(config_json);
  const auto assumptions = validate_assumptions(cfg.problem, 2000);
  if (!assumptions.all_pass()) {
    for (const auto& c : assumptions.checks)
      if (!c.pass)
        throw py::value_error("assumption check " + c.id + " failed: " + c.note);
  }

  const SolveReport rep =
      continuation_solve(cfg.problem, cfg.grid, cfg.newton, cfg.continuation);

  py::dict out;
  out["converged"] = rep.status == SolveStatus::converged;
  out["message"] = rep.message;
  out["grid"] = grid_to_dict(cfg.grid);
  out["epsilon_values"] = rep.epsilon_values;
  out["cauchy_increments"] = rep.cauchy_increments;
  if (rep.status == SolveStatus::converged) {
    out["u"] = field_to_array(rep.u);
    out["m"] = field_to_array(rep.m);
    const double eps = rep.epsilon_values.empty() ? 0.0 : rep.epsilon_values.back();
    const ProblemSpec eff = eps > 0.0 ? with_viscosity(cfg.problem, eps) : cfg.problem;
    out["diagnostics"] = report_to_dict(
        run_diagnostics(eff, cfg.problem, eps, rep.u, rep.m, cfg.diagnostics_tol));
  }
  return out;
}

py::dict py_verify(const py::array_t<double>& u, const py::array_t<double>& m,
                   const std::string& config_json, double epsilon) {
  const RunConfig cfg = parse_config(config_json);
  const SpaceTimeField uf = array_to_field(u, cfg.grid);
  const SpaceTimeField mf = array_to_field(m, cfg.grid);
  const ProblemSpec eff =
      epsilon > 0.0 ? with_viscosity(cfg.problem, epsilon) : cfg.problem;
  return report_to_dict(
      run_diagnostics(eff, cfg.problem, epsilon, uf, mf, cfg.diagnostics_tol));
}

py::array_t<double> py_recover_density(const py::array_t<double>& u,
                                       const std::string& config_json, double epsilon) {
  const RunConfig cfg = parse_config(config_json);
  const ProblemSpec eff =
      epsilon > 0.0 ? with_viscosity(cfg.problem, epsilon) : cfg.problem;
  return field_to_array(recover_density(eff, array_to_field(u, cfg.grid)));
}

py::dict py_oracle_solve(const std::string& config_json, double epsilon) {
  const RunConfig cfg = parse_config(config_json);
  const ProblemSpec eff =
      epsilon > 0.0 ? with_viscosity(cfg.problem, epsilon) : cfg.problem;
  CoupledState init(cfg.grid, 1.0, 1.0);
  for (int i = 0; i < cfg.grid.n_space(); ++i)
    init.m.at(i, 0) = cfg.problem.initial.value(cfg.grid.x_of(i));
  const auto res = coupled_solve(eff, init);
  py::dict out;
  out["converged"] = res.status == OracleStatus::converged;
  out["iterations"] = res.iterations;
  out["residual"] = res.final_residual;
  out["u"] = field_to_array(res.state.u);
  out["m"] = field_to_array(res.state.m);
  return out;
}

py::list py_validate(const std::string& config_json) {
  const RunConfig cfg = parse_config(config_json);
  py::list out;
  for (const auto& c : validate_assumptions(cfg.problem, 2000).checks) {
    py::dict d;
    d["id"] = c.id;
    d["pass"] = c.pass;
    d["worst_margin"] = c.worst_margin;
    d["note"] = c.note;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "first-order mean field games via the elliptic reduction";

  mod.def("solve", &py_solve, py::arg("config_json"),
          "run the continuation solver; returns fields, epsilon path and diagnostics");
  mod.def("verify", &py_verify, py::arg("u"), py::arg("m"), py::arg("config_json"),
          py::arg("epsilon") = 0.0, "re-run the diagnostics bundle on stored fields");
  mod.def("recover_density", &py_recover_density, py::arg("u"), py::arg("config_json"),
          py::arg("epsilon") = 0.0, "pointwise density recovery from a value field");
  mod.def("oracle_solve", &py_oracle_solve, py::arg("config_json"), py::arg("epsilon") = 0.0,
          "small-grid coupled-system reference solver");
  mod.def("validate", &py_validate, py::arg("config_json"),
          "structural assumption checks; returns a list of violations");

  py::register_exception<ConfigError>(mod, "ConfigError");
  py::register_exception<DomainError>(mod, "DomainError");
}
