#include "mfg/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace mfg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) fail(path + "." + key, "missing");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

TrigPoly parse_trig(const json& j, int dim, const std::string& path) {
  TrigPoly p(dim, 0.0);
  if (j.is_number()) {
    p.set_constant(j.get<double>());
    return p;
  }
  if (!j.is_object()) fail(path, "expected a number or an object");
  if (j.contains("constant")) p.set_constant(number(j.at("constant"), path + ".constant"));
  if (j.contains("terms")) {
    const auto& terms = j.at("terms");
    if (!terms.is_array()) fail(path + ".terms", "expected an array");
    int idx = 0;
    for (const auto& t : terms) {
      const std::string tp = path + ".terms[" + std::to_string(idx++) + "]";
      std::array<int, 2> k{0, 0};
      const auto& kj = require(t, "k", tp);
      if (!kj.is_array() || kj.size() < static_cast<size_t>(dim))
        fail(tp + ".k", "expected an array of " + std::to_string(dim) + " integers");
      for (int a = 0; a < dim; ++a) k[a] = integer(kj.at(a), tp + ".k");
      const double c = t.contains("cos") ? number(t.at("cos"), tp + ".cos") : 0.0;
      const double s = t.contains("sin") ? number(t.at("sin"), tp + ".sin") : 0.0;
      p.add(k, c, s);
    }
  }
  return p;
}

MonotoneFn parse_monotone(const json& j, const std::string& path) {
  MonotoneFn f;
  if (!j.is_object()) fail(path, "expected an object");
  if (j.contains("powers")) {
    const auto& arr = j.at("powers");
    if (!arr.is_array()) fail(path + ".powers", "expected an array");
    int idx = 0;
    for (const auto& t : arr) {
      const std::string tp = path + ".powers[" + std::to_string(idx++) + "]";
      const double a = number(require(t, "coef", tp), tp + ".coef");
      const double e = number(require(t, "exponent", tp), tp + ".exponent");
      if (a < 0.0) fail(tp + ".coef", "must be nonnegative");
      if (e <= 0.0) fail(tp + ".exponent", "must be positive");
      f.add_power(a, e);
    }
  }
  if (j.contains("log_coef")) {
    const double b = number(j.at("log_coef"), path + ".log_coef");
    if (b < 0.0) fail(path + ".log_coef", "must be nonnegative");
    f.add_log(b);
  }
  if (f.powers().empty() && !f.has_log()) fail(path, "needs at least one power or log term");
  return f;
}

MatX parse_matrix(const json& j, int dim, const std::string& path) {
  MatX M = MatX::Identity(dim, dim);
  if (j.is_number()) {
    M *= j.get<double>();
    return M;
  }
  if (!j.is_array() || j.size() != static_cast<size_t>(dim)) fail(path, "expected a dim x dim array");
  for (int r = 0; r < dim; ++r) {
    const auto& row = j.at(r);
    if (!row.is_array() || row.size() != static_cast<size_t>(dim))
      fail(path, "expected a dim x dim array");
    for (int c = 0; c < dim; ++c) M(r, c) = number(row.at(c), path);
  }
  return M;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  RunConfig cfg;
  const auto& pj = require(j, "problem", "");
  const int dim = integer(require(pj, "dim", "problem"), "problem.dim");
  if (dim != 1 && dim != 2) fail("problem.dim", "must be 1 or 2");
  cfg.problem.dim = dim;
  cfg.problem.T = number(require(pj, "T", "problem"), "problem.T");
  if (cfg.problem.T <= 0.0) fail("problem.T", "must be positive");

  const auto& hj = require(pj, "hamiltonian", "problem");
  cfg.problem.hamiltonian.dim = dim;
  cfg.problem.hamiltonian.M = hj.contains("M")
                                  ? parse_matrix(hj.at("M"), dim, "problem.hamiltonian.M")
                                  : MatX::Identity(dim, dim);
  cfg.problem.hamiltonian.V = hj.contains("V")
                                  ? parse_trig(hj.at("V"), dim, "problem.hamiltonian.V")
                                  : TrigPoly::zero(dim);
  if (hj.contains("C0"))
    cfg.problem.hamiltonian.C0 = number(hj.at("C0"), "problem.hamiltonian.C0");

  const auto& cj = require(pj, "coupling", "problem");
  cfg.problem.coupling.f0 = parse_monotone(require(cj, "f0", "problem.coupling"), "problem.coupling.f0");
  cfg.problem.coupling.F =
      cj.contains("F") ? parse_trig(cj.at("F"), dim, "problem.coupling.F") : TrigPoly::zero(dim);

  const auto& tj = require(pj, "terminal", "problem");
  cfg.problem.terminal.g0 = parse_monotone(require(tj, "g0", "problem.terminal"), "problem.terminal.g0");
  cfg.problem.terminal.G =
      tj.contains("G") ? parse_trig(tj.at("G"), dim, "problem.terminal.G") : TrigPoly::zero(dim);

  const auto& ij = require(pj, "initial", "problem");
  cfg.problem.initial.m0 = parse_trig(require(ij, "m0", "problem.initial"), dim, "problem.initial.m0");
  if (cfg.problem.initial.m0.mean() != 1.0)
    fail("problem.initial.m0", "mean (constant part) must equal 1");

  const auto& gj = require(j, "grid", "");
  cfg.grid.dim = dim;
  cfg.grid.T = cfg.problem.T;
  cfg.grid.Nx = integer(require(gj, "Nx", "grid"), "grid.Nx");
  cfg.grid.Nt = integer(require(gj, "Nt", "grid"), "grid.Nt");
  if (cfg.grid.Nx < 8) fail("grid.Nx", "must be at least 8");
  if (cfg.grid.Nt < 4) fail("grid.Nt", "must be at least 4");

  if (j.contains("solver")) {
    const auto& sj = j.at("solver");
    if (sj.contains("newton")) {
      const auto& nj = sj.at("newton");
      auto& n = cfg.newton;
      if (nj.contains("abs_tol")) n.abs_tol = number(nj.at("abs_tol"), "solver.newton.abs_tol");
      if (nj.contains("max_iters")) n.max_iters = integer(nj.at("max_iters"), "solver.newton.max_iters");
      if (nj.contains("armijo_c")) n.armijo_c = number(nj.at("armijo_c"), "solver.newton.armijo_c");
      if (nj.contains("min_step")) n.min_step = number(nj.at("min_step"), "solver.newton.min_step");
    }
    if (sj.contains("continuation")) {
      const auto& cj2 = sj.at("continuation");
      auto& c = cfg.continuation;
      if (cj2.contains("theta_steps"))
        c.theta_steps = integer(cj2.at("theta_steps"), "solver.continuation.theta_steps");
      if (cj2.contains("theta_min_step"))
        c.theta_min_step = number(cj2.at("theta_min_step"), "solver.continuation.theta_min_step");
      if (cj2.contains("theta_max_step"))
        c.theta_max_step = number(cj2.at("theta_max_step"), "solver.continuation.theta_max_step");
      if (cj2.contains("epsilon0"))
        c.epsilon0 = number(cj2.at("epsilon0"), "solver.continuation.epsilon0");
      if (cj2.contains("epsilon_ratio"))
        c.epsilon_ratio = number(cj2.at("epsilon_ratio"), "solver.continuation.epsilon_ratio");
      if (cj2.contains("epsilon_floor"))
        c.epsilon_floor = number(cj2.at("epsilon_floor"), "solver.continuation.epsilon_floor");
      if (cj2.contains("cauchy_tol"))
        c.cauchy_tol = number(cj2.at("cauchy_tol"), "solver.continuation.cauchy_tol");
    }
  }

  if (j.contains("diagnostics")) {
    const auto& dj = j.at("diagnostics");
    if (dj.contains("tol")) cfg.diagnostics_tol = number(dj.at("tol"), "diagnostics.tol");
  }
  if (j.contains("output")) {
    const auto& oj = j.at("output");
    if (oj.contains("directory")) {
      if (!oj.at("directory").is_string()) fail("output.directory", "expected a string");
      cfg.output_dir = oj.at("directory").get<std::string>();
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace mfg
