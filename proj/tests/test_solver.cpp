#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfg/presets.hpp"
#include "mfg/propcheck.hpp"
#include "mfg/solver.hpp"

using namespace mfg;

TEST_CASE("theta = 0 trivial solution is an exact discrete root") {
  const auto trivial = blend_theta(presets::se_benchmark(), 0.0);
  GridSpec g{1, 16, 8, 1.0};
  SpaceTimeField u(g, 1.0);
  Eigen::VectorXd F;
  assemble_residual_and_jacobian(trivial, u, F, nullptr);
  CHECK(F.lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("theta = 0 Newton from a perturbed start") {
  const auto r = prop::theta0_exact(presets::se_benchmark(), {1, 32, 16, 1.0}, 8);
  CHECK(r.pass);
  CHECK(r.worst <= 1e-10);
}

TEST_CASE("constant data reproduces the closed-form solution") {
  const auto spec = presets::constant_data();
  GridSpec g{1, 16, 8, 1.0};
  NewtonSettings ns;
  ContinuationSettings cs;
  const auto rep = continuation_solve(spec, g, ns, cs);
  REQUIRE(rep.status == SolveStatus::converged);
  double worst = 0.0;
  for (int j = 0; j <= g.Nt; ++j)
    for (int i = 0; i < g.Nx; ++i)
      worst = std::max(worst, std::abs(rep.u.at(i, j) - (1.0 + (g.T - j * g.dt()))));
  CHECK(worst <= 1e-9);
  for (double mv : rep.m.values) CHECK(mv == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("analytic Jacobian matches finite differences") {
  const auto r = prop::jacobian_fd(presets::se_benchmark(), {1, 16, 8, 1.0}, 3, 5);
  CHECK(r.pass);
  CHECK(r.worst <= 1e-6);
}

TEST_CASE("residual locality") {
  const auto spec = presets::se_benchmark();
  GridSpec g{1, 16, 8, 1.0};
  SpaceTimeField u(g, 1.0);
  Eigen::VectorXd F0, F1;
  assemble_residual_and_jacobian(spec, u, F0, nullptr);
  const int node = g.index(4, 3);
  u.values[node] += 0.01;
  assemble_residual_and_jacobian(spec, u, F1, nullptr);
  int changed = 0;
  for (int r = 0; r < F0.size(); ++r)
    if (F0[r] != F1[r]) {
      ++changed;
      // only rows whose stencil reaches (4,3): |di| <= 2 spatially; |dj| <= 2
      // for interior rows, up to 4 for the one-sided boundary rows
      const int i = g.spatial_of(r), j = g.time_of(r);
      int di = std::abs(i - 4);
      di = std::min(di, g.Nx - di);
      CHECK(di <= 2);
      CHECK(std::abs(j - 3) <= ((j == 0 || j == g.Nt) ? 4 : 2));
    }
  CHECK(changed > 0);
  CHECK(changed < F0.size() / 2);
}

TEST_CASE("warm start terminates immediately") {
  const auto spec = presets::se_benchmark();
  GridSpec g{1, 16, 8, 1.0};
  NewtonSettings ns;
  ContinuationSettings cs;
  const auto rep = continuation_solve(spec, g, ns, cs);
  REQUIRE(rep.status == SolveStatus::converged);
  const auto again = newton_solve(spec, rep.u, ns);
  CHECK(again.status == SolveStatus::converged);
  CHECK(again.iterations <= 1);
}

TEST_CASE("SE benchmark converges with positive density") {
  const auto spec = presets::se_benchmark();
  GridSpec g{1, 32, 16, 1.0};
  NewtonSettings ns;
  ContinuationSettings cs;
  const auto rep = continuation_solve(spec, g, ns, cs);
  REQUIRE(rep.status == SolveStatus::converged);
  for (double mv : rep.m.values) CHECK(mv > 0.0);
  // accepted Newton iterates decrease the residual within each stage
  for (const auto& st : rep.path)
    for (size_t k = 1; k < st.residual_history.size(); ++k)
      CHECK(st.residual_history[k] <= st.residual_history[k - 1] * (1.0 + 1e-12));
}

TEST_CASE("uniqueness probe") {
  const auto spec = presets::se_benchmark();
  GridSpec g{1, 16, 8, 1.0};
  NewtonSettings ns;
  ContinuationSettings cs;
  const auto base = continuation_solve(spec, g, ns, cs);
  REQUIRE(base.status == SolveStatus::converged);

  SpaceTimeField u2 = base.u;
  for (int j = 0; j <= g.Nt; ++j)
    for (int i = 0; i < g.Nx; ++i)
      u2.at(i, j) += 1e-3 * std::cos(2.0 * M_PI * i * g.dx());
  const auto res2 = newton_solve(spec, u2, ns);
  REQUIRE(res2.status == SolveStatus::converged);
  double diff = 0.0;
  for (size_t k = 0; k < base.u.values.size(); ++k)
    diff = std::max(diff, std::abs(base.u.values[k] - res2.u.values[k]));
  CHECK(diff <= 1e-8);
}

TEST_CASE("degenerate case runs the epsilon phase") {
  const auto spec = presets::de_power();
  GridSpec g{1, 16, 8, 1.0};
  NewtonSettings ns;
  ContinuationSettings cs;
  cs.cauchy_tol = 1e-12;  // force the full ladder down to the floor
  cs.epsilon_floor = 1e-4;
  const auto rep = continuation_solve(spec, g, ns, cs);
  REQUIRE(rep.status == SolveStatus::converged);
  REQUIRE(rep.cauchy_increments.size() >= 6);
  for (size_t k = rep.cauchy_increments.size() - 4; k < rep.cauchy_increments.size(); ++k)
    CHECK(rep.cauchy_increments[k] < rep.cauchy_increments[k - 1]);
  CHECK(rep.epsilon_values.front() == doctest::Approx(1.0));
  for (size_t k = 1; k < rep.epsilon_values.size(); ++k)
    CHECK(rep.epsilon_values[k] == doctest::Approx(0.5 * rep.epsilon_values[k - 1]));
}

TEST_CASE("cauchy stop triggers before the floor") {
  const auto spec = presets::de_power();
  GridSpec g{1, 16, 8, 1.0};
  NewtonSettings ns;
  ContinuationSettings cs;
  cs.cauchy_tol = 1e-2;
  const auto rep = continuation_solve(spec, g, ns, cs);
  REQUIRE(rep.status == SolveStatus::converged);
  CHECK(rep.cauchy_reached);
  CHECK(rep.epsilon_values.back() > cs.epsilon_floor);
}

TEST_CASE("inadmissible start reports domain failure") {
  const auto spec = presets::constant_data();  // f = m, w must stay positive
  GridSpec g{1, 16, 8, 1.0};
  SpaceTimeField u(g);
  for (int j = 0; j <= g.Nt; ++j)
    for (int i = 0; i < g.Nx; ++i) u.at(i, j) = 1.0 - 2.0 * (g.T - j * g.dt());
  NewtonSettings ns;
  const auto res = newton_solve(spec, u, ns);
  CHECK(res.status == SolveStatus::domain_failure);
}

TEST_CASE("determinism") {
  const auto spec = presets::se_benchmark();
  GridSpec g{1, 16, 8, 1.0};
  NewtonSettings ns;
  ContinuationSettings cs;
  const auto a = continuation_solve(spec, g, ns, cs);
  const auto b = continuation_solve(spec, g, ns, cs);
  REQUIRE(a.u.values.size() == b.u.values.size());
  for (size_t k = 0; k < a.u.values.size(); ++k) CHECK(a.u.values[k] == b.u.values[k]);
}

TEST_CASE("recovered density of the trivial problem") {
  const auto trivial = blend_theta(presets::se_benchmark(), 0.0);
  GridSpec g{1, 16, 8, 1.0};
  SpaceTimeField u(g, 1.0);
  const auto m = recover_density(trivial, u);
  for (double mv : m.values) CHECK(mv == doctest::Approx(1.0).epsilon(1e-12));
}
