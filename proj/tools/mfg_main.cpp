#include <CLI11.hpp>
#include <Eigen/Core>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "mfg/config.hpp"
#include "mfg/diagnostics.hpp"
#include "mfg/presets.hpp"
#include "mfg/propcheck.hpp"
#include "mfg/solver.hpp"
#include "svg_plot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string out_override;
  bool quiet = false;
  int threads = 0;
};

void info(const GlobalOpts& g, const std::string& msg) {
  if (!g.quiet) std::cout << msg << "\n";
}

const char* status_name(mfg::SolveStatus s) {
  switch (s) {
    case mfg::SolveStatus::converged: return "converged";
    case mfg::SolveStatus::stalled: return "stalled";
    default: return "domain_failure";
  }
}

void write_slice_csv(const std::string& path, const mfg::GridSpec& g,
                     const std::vector<std::pair<std::string, std::vector<double>>>& cols) {
  std::ofstream out(path);
  out << std::setprecision(17) << (g.dim == 1 ? "x" : "x,y");
  for (const auto& c : cols) out << "," << c.first;
  out << "\n";
  for (int i = 0; i < g.n_space(); ++i) {
    const auto x = g.x_of(i);
    out << x[0];
    if (g.dim == 2) out << "," << x[1];
    for (const auto& c : cols) out << "," << c.second[i];
    out << "\n";
  }
}

void write_plots(const fs::path& dir, const mfg::GridSpec& g, const mfg::SpaceTimeField& u,
                 const mfg::SpaceTimeField& m, const mfg::SolveReport& rep) {
  const auto u0 = mfg::time_slice(u, 0), uT = mfg::time_slice(u, g.Nt);
  const auto m0 = mfg::time_slice(m, 0), mT = mfg::time_slice(m, g.Nt);
  write_slice_csv((dir / "plot_u.csv").string(), g, {{"u_t0", u0}, {"u_T", uT}});
  write_slice_csv((dir / "plot_m.csv").string(), g, {{"m_t0", m0}, {"m_T", mT}});

  if (g.dim == 1) {
    std::vector<double> xs(g.Nx);
    for (int i = 0; i < g.Nx; ++i) xs[i] = i * g.dx();
    svgplot::write_line_plot((dir / "plot_u.svg").string(), "value function slices",
                             {{"u(.,0)", xs, u0}, {"u(.,T)", xs, uT}});
    svgplot::write_line_plot((dir / "plot_m.svg").string(), "density slices",
                             {{"m(.,0)", xs, m0}, {"m(.,T)", xs, mT}});
  } else {
    svgplot::write_heatmap((dir / "plot_u0.svg").string(), "u(.,0)", g.Nx, u0);
    svgplot::write_heatmap((dir / "plot_uT.svg").string(), "u(.,T)", g.Nx, uT);
    svgplot::write_heatmap((dir / "plot_m0.svg").string(), "m(.,0)", g.Nx, m0);
    svgplot::write_heatmap((dir / "plot_mT.svg").string(), "m(.,T)", g.Nx, mT);
  }

  // concatenated Newton residual history across continuation stages
  {
    svgplot::Series s{"residual", {}, {}};
    std::ofstream csv((dir / "convergence.csv").string());
    csv << std::setprecision(17) << "step,theta,epsilon,residual\n";
    int step = 0;
    for (const auto& st : rep.path)
      for (double r : st.residual_history) {
        s.x.push_back(step);
        s.y.push_back(std::max(r, 1e-300));
        csv << step << "," << st.theta << "," << st.epsilon << "," << r << "\n";
        ++step;
      }
    svgplot::write_line_plot((dir / "convergence.svg").string(),
                             "Newton residual across continuation", {s}, true);
  }
  if (!rep.cauchy_increments.empty()) {
    svgplot::Series s{"increment", {}, {}};
    std::ofstream csv((dir / "epsilon.csv").string());
    csv << std::setprecision(17) << "epsilon,l2_increment\n";
    for (size_t k = 0; k < rep.cauchy_increments.size(); ++k) {
      s.x.push_back(std::log10(rep.epsilon_values[k + 1]));
      s.y.push_back(rep.cauchy_increments[k]);
      csv << rep.epsilon_values[k + 1] << "," << rep.cauchy_increments[k] << "\n";
    }
    svgplot::write_line_plot((dir / "epsilon.svg").string(),
                             "density increments vs log10(epsilon)", {s}, true);
  }
}

json report_to_json(const mfg::SolveReport& rep, double eps_final,
                    const mfg::DiagnosticsReport& diag) {
  json j;
  j["status"] = status_name(rep.status);
  j["message"] = rep.message;
  j["epsilon"] = eps_final;
  j["path"] = json::array();
  for (const auto& st : rep.path)
    j["path"].push_back({{"theta", st.theta},
                         {"epsilon", st.epsilon},
                         {"newton_iters", st.newton_iters},
                         {"final_residual", st.final_residual}});
  j["epsilon_values"] = rep.epsilon_values;
  j["cauchy_increments"] = rep.cauchy_increments;
  j["cauchy_reached"] = rep.cauchy_reached;
  j["diagnostics"] = json::parse(mfg::serialize(diag));
  return j;
}

// diagnostics bundle shared by solve and sweep, including the
// viscous-sequence monitors when an epsilon phase ran
mfg::DiagnosticsReport full_diagnostics(const mfg::RunConfig& cfg, const mfg::SolveReport& rep,
                                        double eps_final) {
  const bool degenerate = !cfg.problem.strictly_elliptic();
  const mfg::ProblemSpec eff =
      degenerate ? mfg::with_viscosity(cfg.problem, eps_final) : cfg.problem;
  auto diag = mfg::run_diagnostics(eff, cfg.problem, eps_final, rep.u, rep.m,
                                   cfg.diagnostics_tol);

  if (rep.eps_u.size() >= 2) {
    std::vector<mfg::EpsSolution> seq;
    for (size_t k = 0; k < rep.eps_u.size(); ++k)
      seq.push_back({rep.epsilon_values[k], rep.eps_u[k], rep.eps_m[k]});
    mfg::lipschitz_monitor(cfg.problem, seq, diag);

    double worst_term = 1e300;
    for (size_t k = 0; k + 1 < seq.size(); ++k) {
      const auto ll = mfg::lasry_lions_gap(cfg.problem, seq[k].u, seq[k].m, seq[k + 1].u,
                                           seq[k + 1].m);
      worst_term = std::min({worst_term, ll.M_ab, ll.M_ba, ll.M_g, ll.M_f});
    }
    mfg::CheckEntry e;
    e.id = "lasry_lions_terms";
    e.measured = worst_term;
    e.bound = 0.0;
    e.tol = 1e-8;
    e.pass = worst_term >= -1e-8;
    e.note = "worst monotonicity term over consecutive epsilon pairs";
    diag.add(e);
  }
  if (degenerate && !rep.cauchy_reached) {
    mfg::CheckEntry w;
    w.id = "cauchy_stop";
    w.gating = false;
    w.pass = false;
    w.note = "epsilon floor reached before the Cauchy tolerance";
    diag.add(w);
  }
  return diag;
}

int cmd_solve(const std::string& cfg_path, const GlobalOpts& opts) {
  mfg::RunConfig cfg;
  try {
    cfg = mfg::load_config(cfg_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  }
  if (!opts.out_override.empty()) cfg.output_dir = opts.out_override;

  const auto assumptions = mfg::validate_assumptions(cfg.problem);
  if (!assumptions.all_pass()) {
    for (const auto& c : assumptions.checks)
      if (!c.pass)
        std::cerr << "assumption " << c.id << " violated (margin " << c.worst_margin << ")\n";
    return 3;
  }

  info(opts, "solving on " + std::to_string(cfg.grid.Nx) + "x" + std::to_string(cfg.grid.Nt) +
                 " grid");
  const auto rep = mfg::continuation_solve(cfg.problem, cfg.grid, cfg.newton, cfg.continuation);
  const bool degenerate = !cfg.problem.strictly_elliptic();
  const double eps_final =
      degenerate && !rep.epsilon_values.empty() ? rep.epsilon_values.back() : 0.0;

  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);

  json j;
  if (rep.status == mfg::SolveStatus::converged) {
    const auto diag = full_diagnostics(cfg, rep, eps_final);
    mfg::dump_csv((dir / "solution.csv").string(), cfg.grid, {&rep.u, &rep.m}, {"u", "m"});
    write_plots(dir, cfg.grid, rep.u, rep.m, rep);
    j = report_to_json(rep, eps_final, diag);
    info(opts, std::string("solve ") + status_name(rep.status) + ", diagnostics " +
                   (diag.all_pass() ? "pass" : "FAIL"));
  } else {
    j["status"] = status_name(rep.status);
    j["message"] = rep.message;
    std::cerr << "solve failed: " << rep.message << "\n";
  }
  std::ofstream(dir / "report.json") << j.dump(2) << "\n";
  return rep.status == mfg::SolveStatus::converged ? 0 : 2;
}

int cmd_verify(const std::string& csv_path, const std::string& cfg_path, double eps_flag,
               const GlobalOpts& opts) {
  mfg::RunConfig cfg;
  try {
    cfg = mfg::load_config(cfg_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  }
  if (!opts.out_override.empty()) cfg.output_dir = opts.out_override;

  std::vector<mfg::SpaceTimeField> fields;
  try {
    fields = mfg::load_csv(csv_path, cfg.grid, 2);
  } catch (const std::exception& e) {
    std::cerr << "load error: " << e.what() << "\n";
    return 3;
  }

  double eps = eps_flag;
  if (eps < 0.0) {
    // fall back to the sidecar report written by solve, else assume 0
    eps = 0.0;
    const fs::path sidecar = fs::path(csv_path).parent_path() / "report.json";
    std::ifstream in(sidecar);
    if (in) {
      try {
        eps = json::parse(in).value("epsilon", 0.0);
      } catch (...) {
      }
    }
  }

  const bool degenerate = !cfg.problem.strictly_elliptic();
  const mfg::ProblemSpec eff =
      degenerate && eps > 0.0 ? mfg::with_viscosity(cfg.problem, eps) : cfg.problem;
  const auto diag = mfg::run_diagnostics(eff, cfg.problem, eps, fields[0], fields[1],
                                         cfg.diagnostics_tol);

  fs::create_directories(cfg.output_dir);
  std::ofstream(fs::path(cfg.output_dir) / "verify_report.json") << mfg::serialize(diag) << "\n";
  for (const auto& e : diag.entries)
    if (e.applicable && e.gating && !e.pass)
      std::cerr << "check failed: " << e.id << " (measured " << e.measured << ", tol " << e.tol
                << ")\n";
  info(opts, diag.all_pass() ? "verify pass" : "verify FAIL");
  return diag.all_pass() ? 0 : 1;
}

int cmd_sweep(const std::string& cfg_path, const GlobalOpts& opts) {
  mfg::RunConfig cfg;
  try {
    cfg = mfg::load_config(cfg_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  }
  if (!opts.out_override.empty()) cfg.output_dir = opts.out_override;
  if (cfg.problem.strictly_elliptic()) {
    std::cerr << "sweep: config is strictly elliptic; no epsilon phase to study\n";
    return 3;
  }

  const auto rep = mfg::continuation_solve(cfg.problem, cfg.grid, cfg.newton, cfg.continuation);
  if (rep.status != mfg::SolveStatus::converged) {
    std::cerr << "sweep failed: " << rep.message << "\n";
    return 2;
  }

  fs::create_directories(cfg.output_dir);
  std::ofstream csv(fs::path(cfg.output_dir) / "sweep.csv");
  csv << std::setprecision(17) << "epsilon,l2_increment,max_grad,ll_sum\n";
  if (!opts.quiet)
    std::cout << "epsilon        l2_increment   max|Du|        LL sum\n";
  for (size_t k = 0; k < rep.eps_u.size(); ++k) {
    const double inc = k == 0 ? 0.0 : rep.cauchy_increments[k - 1];
    const double gmax = mfg::max_gradient_norm(rep.eps_u[k]);
    double llsum = 0.0;
    if (k > 0) {
      const auto ll = mfg::lasry_lions_gap(cfg.problem, rep.eps_u[k - 1], rep.eps_m[k - 1],
                                           rep.eps_u[k], rep.eps_m[k]);
      llsum = ll.sum();
    }
    csv << rep.epsilon_values[k] << "," << inc << "," << gmax << "," << llsum << "\n";
    if (!opts.quiet)
      std::cout << std::setw(14) << std::left << rep.epsilon_values[k] << " " << std::setw(14)
                << inc << " " << std::setw(14) << gmax << " " << llsum << "\n";
  }
  return 0;
}

int cmd_selftest(const GlobalOpts& opts) {
  using mfg::prop::PropResult;
  const auto se = mfg::presets::se_benchmark();

  mfg::ProblemSpec se2d;
  se2d.dim = 2;
  se2d.hamiltonian.dim = 2;
  se2d.hamiltonian.M = mfg::MatX(2, 2);
  se2d.hamiltonian.M << 7.0, -2.0, -2.0, 1.0;
  se2d.hamiltonian.V = mfg::TrigPoly::zero(2);
  se2d.coupling.f0 = mfg::MonotoneFn::power_log(1.0, 1.0, 1.0);
  se2d.coupling.F = mfg::TrigPoly::zero(2);
  se2d.coupling.F.add({1, 1}, 0.2);
  se2d.terminal.g0 = mfg::MonotoneFn::power(1.0, 1.0);
  se2d.terminal.G = mfg::TrigPoly::zero(2);
  se2d.initial.m0 = mfg::TrigPoly(2, 1.0);

  std::vector<std::pair<std::string, PropResult>> rows;
  rows.emplace_back("inverse_roundtrip_se",
                    mfg::prop::inverse_roundtrip(se.coupling.f0, 500, 11));
  rows.emplace_back("inverse_roundtrip_mixed",
                    mfg::prop::inverse_roundtrip(mfg::MonotoneFn::power_log(2.0, 2.0, 0.5), 500, 12));
  rows.emplace_back("det_identity_1d", mfg::prop::det_identity(se, 2000, 21));
  rows.emplace_back("det_identity_2d", mfg::prop::det_identity(se2d, 2000, 22));
  rows.emplace_back("trace_inequality_1d", mfg::prop::trace_inequality(se, 2000, 31));
  rows.emplace_back("trace_inequality_2d", mfg::prop::trace_inequality(se2d, 2000, 32));
  rows.emplace_back("jacobian_fd", mfg::prop::jacobian_fd(se, {1, 16, 8, se.T}, 5, 41));
  rows.emplace_back("theta0_exact", mfg::prop::theta0_exact(se, {1, 32, 16, se.T}));
  rows.emplace_back("oracle_cross_check", mfg::prop::oracle_cross_check(se, 16, 8));

  bool all = true;
  std::cout << std::left << std::setw(26) << "check" << std::setw(8) << "result"
            << "worst / detail\n";
  for (const auto& [name, r] : rows) {
    all = all && r.pass;
    std::cout << std::setw(26) << name << std::setw(8) << (r.pass ? "pass" : "FAIL") << r.worst;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << "\n";
  }
  std::cout << (all ? "selftest pass" : "selftest FAIL") << "\n";
  (void)opts;
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean field game solver and verification harness"};
  app.require_subcommand(1);

  GlobalOpts opts;
  app.add_option("--out", opts.out_override, "override the output directory");
  app.add_flag("--quiet", opts.quiet, "suppress progress output");
  app.add_option("--threads", opts.threads, "linear algebra thread count");

  std::string cfg_path, csv_path;
  double eps_flag = -1.0;

  auto* solve = app.add_subcommand("solve", "run the continuation solver on a config");
  solve->fallthrough();
  solve->add_option("config", cfg_path, "config file (JSON)")->required();

  auto* verify = app.add_subcommand("verify", "re-run diagnostics on a stored solution");
  verify->fallthrough();
  verify->add_option("solution", csv_path, "solution.csv from a previous solve")->required();
  verify->add_option("config", cfg_path, "config file (JSON)")->required();
  verify->add_option("--epsilon", eps_flag, "viscosity of the stored solution");

  auto* sweep = app.add_subcommand("sweep", "epsilon-study table for a degenerate config");
  sweep->fallthrough();
  sweep->add_option("config", cfg_path, "config file (JSON)")->required();

  app.add_subcommand("selftest", "run the sampled property suite")->fallthrough();

  CLI11_PARSE(app, argc, argv);
  if (opts.threads > 0) Eigen::setNbThreads(opts.threads);

  if (app.got_subcommand("solve")) return cmd_solve(cfg_path, opts);
  if (app.got_subcommand("verify")) return cmd_verify(csv_path, cfg_path, eps_flag, opts);
  if (app.got_subcommand("sweep")) return cmd_sweep(cfg_path, opts);
  return cmd_selftest(opts);
}
