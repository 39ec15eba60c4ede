#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mfg/model.hpp"
#include "mfg/presets.hpp"

using namespace mfg;

namespace {

ProblemSpec with_coupling(MonotoneFn f0) {
  ProblemSpec s = presets::constant_data();
  s.coupling.f0 = std::move(f0);
  return s;
}

}  // namespace

TEST_CASE("chi closed forms") {
  const Point x{0.0, 0.0};
  CHECK(eval_chi(with_coupling(MonotoneFn::logarithm(1.0)), x, 0.7) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(eval_chi(with_coupling(MonotoneFn::power(1.0, 1.0)), x, 2.5) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(eval_chi(with_coupling(MonotoneFn::power(1.0, 2.0)), x, 4.0) == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("coupling inverse") {
  const Point x{0.0, 0.0};
  CHECK(invert_coupling(with_coupling(MonotoneFn::logarithm(1.0)), x, 0.0) == doctest::Approx(1.0));
  CHECK(invert_coupling(with_coupling(MonotoneFn::power_log(1.0, 1.0, 1.0)), x, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-13));

  // bracketed root-find case, checked by re-evaluating f
  const auto f = MonotoneFn::power_log(1.0, 2.0, 1.0);
  const double m = f.inverse(4.5);
  CHECK(std::abs(f.value(m) - 4.5) <= 1e-12 * 5.5);

  CHECK_THROWS_AS(MonotoneFn::power(1.0, 1.0).inverse(-0.5), DomainError);
}

TEST_CASE("inverse round-trip across families") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> um(1e-3, 40.0);
  const MonotoneFn families[] = {
      MonotoneFn::power(1.0, 1.0), MonotoneFn::power(2.0, 2.0), MonotoneFn::logarithm(1.5),
      MonotoneFn::power_log(1.0, 1.0, 1.0), MonotoneFn::power_log(0.5, 3.0, 0.2)};
  for (const auto& f : families)
    for (int k = 0; k < 2000; ++k) {
      const double m = um(rng);
      const double w = f.value(m);
      CHECK(std::abs(f.inverse(w) - m) <= 1e-12 * m);
    }
}

TEST_CASE("chi_w matches central differences of chi") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> uw(-2.0, 4.0);
  const auto spec = with_coupling(MonotoneFn::power_log(1.0, 2.0, 0.7));
  const Point x{0.0, 0.0};
  for (int k = 0; k < 200; ++k) {
    const double w = uw(rng);
    const double h = 1e-6 * (1.0 + std::abs(w));
    const double fd = (eval_chi(spec, x, w + h) - eval_chi(spec, x, w - h)) / (2.0 * h);
    const double m = invert_coupling(spec, x, w);
    const double an = spec.coupling.f0.m_slope_w(m);
    CHECK(std::abs(fd - an) <= 1e-6 * (1.0 + std::abs(an)));
  }
}

TEST_CASE("degeneracy classification") {
  CHECK(with_coupling(MonotoneFn::power_log(1.0, 1.0, 1.0)).strictly_elliptic());
  CHECK_FALSE(with_coupling(MonotoneFn::power(1.0, 1.0)).strictly_elliptic());
  // chi at f(m) vanishes with m exactly in the pure-power case
  const auto de = MonotoneFn::power(1.0, 2.0);
  CHECK(de.m_slope(1e-8) == doctest::Approx(0.0).epsilon(1e-14));
  const auto se = MonotoneFn::power_log(1.0, 2.0, 0.3);
  CHECK(se.m_slope(1e-8) >= 0.3);
}

TEST_CASE("derivative bundle values") {
  ProblemSpec s = presets::constant_data();
  s.coupling.f0 = MonotoneFn::logarithm(1.0);
  VecX p(1);
  p[0] = 3.0;
  const auto db = eval_derivative_bundle(s, {0.3, 0.0}, p, 4.5);
  CHECK(db.dp_H[0] == doctest::Approx(3.0));
  CHECK(db.dpp_H(0, 0) == doctest::Approx(1.0));

  // f = log m: chi is identically 1, h_w = 0
  CHECK(db.chi == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(db.h == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(db.h_w == doctest::Approx(0.0));

  s.hamiltonian.V = TrigPoly(1, 0.0);
  s.hamiltonian.V.add({1, 0}, 1.0);  // V = cos 2 pi x
  VecX p0 = VecX::Zero(1);
  const auto db2 = eval_derivative_bundle(s, {0.25, 0.0}, p0, 0.0);
  CHECK(db2.dx_H[0] == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  // numeric cross-check of D_x H = -V'
  const double h = 1e-6;
  const double fd = -(s.hamiltonian.V.value({0.25 + h, 0.0}) -
                      s.hamiltonian.V.value({0.25 - h, 0.0})) / (2.0 * h);
  CHECK(db2.dx_H[0] == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("assumption validation") {
  const auto se = presets::se_benchmark();
  CHECK(validate_assumptions(se).all_pass());

  SUBCASE("eigenvalue violation fails H1") {
    ProblemSpec bad = se;
    bad.hamiltonian.M(0, 0) = 10.0 * bad.hamiltonian.C0;
    const auto rep = validate_assumptions(bad);
    CHECK_FALSE(rep.all_pass());
    REQUIRE(rep.find("H1") != nullptr);
    CHECK_FALSE(rep.find("H1")->pass);
  }
  SUBCASE("F2 holds for f = m + log m at C0 = 4") {
    ProblemSpec s = se;
    s.hamiltonian.C0 = 4.0;
    const auto rep = validate_assumptions(s);
    REQUIRE(rep.find("F2") != nullptr);
    CHECK(rep.find("F2")->pass);
  }
  SUBCASE("log terminal cost under DE fails") {
    ProblemSpec s = presets::de_power();
    s.terminal.g0 = MonotoneFn::power_log(1.0, 1.0, 0.5);
    const auto rep = validate_assumptions(s);
    REQUIRE(rep.find("E-DE-g") != nullptr);
    CHECK_FALSE(rep.find("E-DE-g")->pass);
  }
  SUBCASE("m0 with wrong mass fails M1") {
    ProblemSpec s = se;
    s.initial.m0.set_constant(1.1);
    const auto rep = validate_assumptions(s);
    REQUIRE(rep.find("M1") != nullptr);
    CHECK_FALSE(rep.find("M1")->pass);
  }
}

TEST_CASE("envelopes") {
  ProblemSpec s = presets::constant_data();
  auto e = envelopes(s);
  CHECK(e.f_lower(2.0) == doctest::Approx(e.f_upper(2.0)));

  s.coupling.F = TrigPoly(1, 0.0);
  s.coupling.F.add({1, 0}, 0.3);
  s.terminal.G = TrigPoly(1, 0.0);
  s.terminal.G.add({1, 0}, 0.0, 0.1);  // 0.1 sin
  e = envelopes(s);
  CHECK(e.f_upper(2.0) == doctest::Approx(s.coupling.f0.value(2.0) + 0.3).epsilon(1e-9));
  CHECK(e.g_lower(2.0) == doctest::Approx(1.9).epsilon(1e-9));
}

TEST_CASE("theta blend") {
  const auto se = presets::se_benchmark();
  CHECK_THROWS_AS(blend_theta(se, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(blend_theta(se, 1.5), std::invalid_argument);

  const auto t0 = blend_theta(se, 0.0);
  VecX p(1);
  p[0] = 1.5;
  // H^0 = |p|^2/2 + f(x,1); f(x,1) = f0(1) = 1 for the benchmark (F = 0)
  CHECK(t0.hamiltonian.value({0.37, 0.0}, p) == doctest::Approx(0.5 * 1.5 * 1.5 + 1.0).epsilon(1e-12));
  CHECK(t0.terminal.value({0.1, 0.0}, 2.3) == doctest::Approx(2.3).epsilon(1e-12));
  CHECK(t0.initial.value({0.6, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));

  const auto t1 = blend_theta(se, 1.0);
  CHECK(t1.hamiltonian.value({0.37, 0.0}, p) ==
        doctest::Approx(se.hamiltonian.value({0.37, 0.0}, p)).epsilon(1e-12));
  CHECK(t1.initial.value({0.6, 0.0}) == doctest::Approx(se.initial.value({0.6, 0.0})).epsilon(1e-12));
  CHECK(t1.terminal.value({0.1, 0.0}, 2.3) == doctest::Approx(se.terminal.value({0.1, 0.0}, 2.3)));

  // the coupling never blends
  CHECK(t0.coupling.value({0.2, 0.0}, 1.7) == se.coupling.value({0.2, 0.0}, 1.7));
}

TEST_CASE("viscous regularization") {
  const auto de = presets::de_power();
  const auto eps = with_viscosity(de, 0.25);
  CHECK(eps.coupling.f0.log_coef() == doctest::Approx(0.25));
  CHECK(eps.strictly_elliptic());
  CHECK(eps.coupling.value({0.0, 0.0}, 2.0) ==
        doctest::Approx(2.0 + 0.25 * std::log(2.0)).epsilon(1e-13));
}
