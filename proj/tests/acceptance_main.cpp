// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Criteria are fixed desk-scale properties of the solver.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mfg/diagnostics.hpp"
#include "mfg/presets.hpp"
#include "mfg/propcheck.hpp"
#include "mfg/solver.hpp"

using namespace mfg;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Criterion> results;

void record(int id, const std::string& name, bool pass, const std::string& detail) {
  results.push_back({id, name, pass, detail});
  std::printf("criterion %2d [%s] %s -- %s\n", id, pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

// solve cache for the strictly elliptic benchmark at three refinement levels
struct LevelSolve {
  GridSpec grid;
  SolveReport rep;
};

LevelSolve solve_level(const ProblemSpec& spec, int Nx, int Nt) {
  LevelSolve out;
  out.grid = GridSpec{1, Nx, Nt, spec.T};
  NewtonSettings ns;
  ContinuationSettings cs;
  out.rep = continuation_solve(spec, out.grid, ns, cs);
  return out;
}

// sup difference on shared nodes between a coarse and a twice-refined field
double shared_node_diff(const SpaceTimeField& coarse, const SpaceTimeField& fine) {
  const auto& gc = coarse.grid;
  double d = 0.0;
  for (int j = 0; j <= gc.Nt; ++j)
    for (int i = 0; i < gc.n_space(); ++i)
      d = std::max(d, std::abs(coarse.at(i, j) - fine.at(2 * i, 2 * j)));
  return d;
}

}  // namespace

int main() {
  char buf[256];

  // 1: trivial-problem exactness at Nx=64, Nt=32
  {
    const auto t0 = Clock::now();
    const auto r = prop::theta0_exact(presets::se_benchmark(), {1, 64, 32, 1.0}, 10);
    const double dt = seconds_since(t0);
    std::snprintf(buf, sizeof buf, "%s, %.2fs", r.detail.c_str(), dt);
    record(1, "trivial solution exactness", r.pass && dt < 1.0, buf);
  }

  // 2: constant-data closed form u = 1 + (T - t)
  {
    const auto spec = presets::constant_data();
    const auto ls = solve_level(spec, 32, 16);
    double worst = 1e300;
    if (ls.rep.status == SolveStatus::converged) {
      worst = 0.0;
      for (int j = 0; j <= ls.grid.Nt; ++j)
        for (int i = 0; i < ls.grid.Nx; ++i)
          worst = std::max(worst,
                           std::abs(ls.rep.u.at(i, j) - (1.0 + (1.0 - j * ls.grid.dt()))));
    }
    std::snprintf(buf, sizeof buf, "max deviation %.3e", worst);
    record(2, "constant data closed form", worst <= 1e-9, buf);
  }

  // 3: determinant identity over 10^4 sampled states
  {
    const auto t0 = Clock::now();
    const auto r = prop::det_identity(presets::se_benchmark(), 10000, 101);
    const double dt = seconds_since(t0);
    std::snprintf(buf, sizeof buf, "worst rel error %.3e, %.2fs", r.worst, dt);
    record(3, "coefficient determinant identity", r.pass && dt < 5.0, buf);
  }

  // 4: trace inequality over 10^4 sampled (state, Hessian) pairs
  {
    const auto t0 = Clock::now();
    const auto r = prop::trace_inequality(presets::se_benchmark(), 10000, 202);
    const double dt = seconds_since(t0);
    std::snprintf(buf, sizeof buf, "worst margin %.3e, %.2fs", r.worst, dt);
    record(4, "trace inequality sampling", r.pass && dt < 10.0, buf);
  }

  // 5: analytic Jacobian vs finite differences, 20 states
  {
    const auto t0 = Clock::now();
    const auto r = prop::jacobian_fd(presets::se_benchmark(), {1, 16, 8, 1.0}, 20, 303);
    const double dt = seconds_since(t0);
    std::snprintf(buf, sizeof buf, "worst rel column error %.3e, %.2fs", r.worst, dt);
    record(5, "Jacobian correctness", r.pass && dt < 30.0, buf);
  }

  // shared solves for the remaining criteria
  const auto se = presets::se_benchmark();
  const auto se16 = solve_level(se, 16, 8);
  const auto se32 = solve_level(se, 32, 16);
  const auto se64 = solve_level(se, 64, 32);
  const bool se_ok = se16.rep.status == SolveStatus::converged &&
                     se32.rep.status == SolveStatus::converged &&
                     se64.rep.status == SolveStatus::converged;

  // 6: elliptic solver vs coupled-system oracle, refinement order
  {
    const auto r = prop::oracle_cross_check(se, 16, 8);
    record(6, "coupled-oracle cross check", r.pass, r.detail);
  }

  // 7: a priori bound checks with calibrated tolerance
  {
    const auto spec = presets::se_benchmark_xindep();
    const auto c16 = solve_level(spec, 16, 8);
    const auto c32 = solve_level(spec, 32, 16);
    bool pass = c16.rep.status == SolveStatus::converged &&
                c32.rep.status == SolveStatus::converged;
    std::string detail = "solve failed";
    if (pass) {
      const double tol_u = 10.0 * shared_node_diff(c16.rep.u, c32.rep.u);
      const double tol_m = 10.0 * shared_node_diff(c16.rep.m, c32.rep.m);
      const double tol = std::max(tol_u, tol_m);
      DiagnosticsReport r;
      check_solution_bounds(spec, c32.rep.u, c32.rep.m, tol, r);
      check_ut_bounds(spec, c32.rep.u, c32.rep.m, tol, r);
      pass = r.find("u_envelope_bounds")->pass && r.find("terminal_density_bounds")->pass &&
             r.find("ut_bounds")->pass;
      std::snprintf(buf, sizeof buf, "tol %.3e, worst margins %.3e / %.3e / %.3e", tol,
                    r.find("u_envelope_bounds")->measured,
                    r.find("terminal_density_bounds")->measured, r.find("ut_bounds")->measured);
      detail = buf;
    }
    record(7, "a priori bounds", pass, detail);
  }

  // 8: energy identity residual: zero on constant data, order >= 0.7 on the benchmark
  {
    const auto cd = presets::constant_data();
    GridSpec g{1, 16, 8, 1.0};
    SpaceTimeField u(g);
    for (int j = 0; j <= g.Nt; ++j)
      for (int i = 0; i < g.Nx; ++i) u.at(i, j) = 1.0 + (1.0 - j * g.dt());
    SpaceTimeField m(g, 1.0);
    const double exact = energy_identity_residual(cd, u, m);

    bool pass = se_ok && exact <= 1e-10;
    std::string detail = "solve failed";
    if (se_ok) {
      const double e1 = energy_identity_residual(se, se16.rep.u, se16.rep.m);
      const double e2 = energy_identity_residual(se, se32.rep.u, se32.rep.m);
      const double e3 = energy_identity_residual(se, se64.rep.u, se64.rep.m);
      const double order = 0.5 * std::log2(e1 / e3);
      pass = pass && order >= 0.7;
      std::snprintf(buf, sizeof buf,
                    "constant-data residual %.3e; refinement %.3e -> %.3e -> %.3e, order %.2f",
                    exact, e1, e2, e3, order);
      detail = buf;
    }
    record(8, "energy identity", pass, detail);
  }

  // 9: vanishing-viscosity sweep on the degenerate benchmark
  {
    const auto t0 = Clock::now();
    const auto spec = presets::de_power();
    GridSpec g{1, 64, 32, 1.0};
    NewtonSettings ns;
    ContinuationSettings cs;
    cs.cauchy_tol = 1e-15;  // run the full ladder down to the floor
    const auto rep = continuation_solve(spec, g, ns, cs);
    const double dt = seconds_since(t0);

    bool pass = rep.status == SolveStatus::converged && rep.cauchy_increments.size() >= 5;
    std::string detail = "solve failed";
    if (pass) {
      const size_t n = rep.cauchy_increments.size();
      bool dec = true;
      for (size_t k = n - 4; k < n; ++k)
        dec = dec && rep.cauchy_increments[k] < rep.cauchy_increments[k - 1];

      double worst_ll = 1e300;
      for (size_t k = 0; k + 1 < rep.eps_u.size(); ++k) {
        const auto ll = lasry_lions_gap(spec, rep.eps_u[k], rep.eps_m[k], rep.eps_u[k + 1],
                                        rep.eps_m[k + 1]);
        worst_ll = std::min({worst_ll, ll.M_ab, ll.M_ba, ll.M_g, ll.M_f});
      }

      std::vector<double> grads;
      for (const auto& u : rep.eps_u) grads.push_back(max_gradient_norm(u));
      double lo = grads[grads.size() - 4], hi = lo;
      for (size_t k = grads.size() - 4; k < grads.size(); ++k) {
        lo = std::min(lo, grads[k]);
        hi = std::max(hi, grads[k]);
      }
      const double var = (hi - lo) / hi;

      pass = dec && worst_ll >= -1e-8 && var < 0.10 && dt < 300.0;
      std::snprintf(buf, sizeof buf,
                    "%zu eps steps, increments %s, worst LL term %.2e, grad var %.2f%%, %.1fs",
                    rep.epsilon_values.size(), dec ? "decreasing" : "NOT decreasing", worst_ll,
                    100.0 * var, dt);
      detail = buf;
    }
    record(9, "vanishing-viscosity limit", pass, detail);
  }

  // 10: two distinct Newton starts agree
  {
    bool pass = se_ok;
    std::string detail = "solve failed";
    if (se_ok) {
      NewtonSettings ns;
      const auto& g = se32.grid;
      SpaceTimeField ua = se32.rep.u, ub = se32.rep.u;
      for (int j = 0; j <= g.Nt; ++j)
        for (int i = 0; i < g.Nx; ++i) {
          ua.at(i, j) += 1e-3 * std::cos(2.0 * M_PI * i * g.dx());
          ub.at(i, j) -= 1e-3 * std::sin(2.0 * M_PI * i * g.dx()) + 5e-4;
        }
      const auto ra = newton_solve(se, ua, ns);
      const auto rb = newton_solve(se, ub, ns);
      pass = ra.status == SolveStatus::converged && rb.status == SolveStatus::converged;
      double diff = 1e300;
      if (pass) diff = sup_diff(ra.u.values, rb.u.values);
      pass = pass && diff <= 1e-8;
      std::snprintf(buf, sizeof buf, "sup difference %.3e", diff);
      detail = buf;
    }
    record(10, "uniqueness probe", pass, detail);
  }

  // 11: mass drift shrinks by >= 3.4 per grid halving
  {
    const auto se128 = solve_level(se, 128, 64);
    bool pass = se_ok && se128.rep.status == SolveStatus::converged;
    std::string detail = "solve failed";
    if (pass) {
      const double d1 = fp_residual(se, se32.rep.u, se32.rep.m).mass_drift;
      const double d2 = fp_residual(se, se64.rep.u, se64.rep.m).mass_drift;
      const double d3 = fp_residual(se, se128.rep.u, se128.rep.m).mass_drift;
      pass = d1 / d2 >= 3.4 && d2 / d3 >= 3.4;
      std::snprintf(buf, sizeof buf, "drift %.3e -> %.3e -> %.3e (ratios %.2f, %.2f)", d1, d2,
                    d3, d1 / d2, d2 / d3);
      detail = buf;
    }
    record(11, "mass conservation order", pass, detail);
  }

  int failures = 0;
  for (const auto& c : results)
    if (!c.pass) ++failures;
  std::printf("%d/%zu criteria passed\n", int(results.size()) - failures, results.size());
  return failures == 0 ? 0 : 1;
}
