#include "mfg/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

namespace mfg {

double eval_chi(const ProblemSpec& spec, const Point& x, double w) {
  return spec.coupling.chi(x, w);
}

double invert_coupling(const ProblemSpec& spec, const Point& x, double w) {
  return spec.coupling.inverse(x, w);
}

DerivativeBundle eval_derivative_bundle(const ProblemSpec& spec, const Point& x,
                                        const VecX& p, double s) {
  const auto& H = spec.hamiltonian;
  DerivativeBundle b;
  b.H = H.value(x, p);
  b.dp_H = H.grad_p(p);
  b.dpp_H = H.hess_pp();
  b.dx_H = H.grad_x(x);
  b.w = -s + b.H;

  const double w0 = b.w - spec.coupling.F.value(x);
  b.m = spec.coupling.f0.inverse(w0);
  b.f_m = spec.coupling.f0.slope(b.m);
  auto gF = spec.coupling.F.gradient(x);
  b.dx_f = VecX(spec.dim);
  for (int a = 0; a < spec.dim; ++a) b.dx_f[a] = gF[a];

  b.chi = spec.coupling.f0.m_slope(b.m);
  b.chi_w = spec.coupling.f0.m_slope_w(b.m);
  b.h = std::sqrt(std::max(b.chi, 0.0));
  b.h_w = (b.h > 0.0) ? b.chi_w / (2.0 * b.h) : 0.0;
  return b;
}

Envelopes envelopes(const ProblemSpec& spec) {
  Envelopes e;
  e.F_min = spec.coupling.F.min_value();
  e.F_max = spec.coupling.F.max_value();
  e.G_min = spec.terminal.G.min_value();
  e.G_max = spec.terminal.G.max_value();
  e.f0 = &spec.coupling.f0;
  e.g0 = &spec.terminal.g0;
  return e;
}

namespace {

Point random_point(int dim, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point x{0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = u(rng);
  return x;
}

}  // namespace

AssumptionReport validate_assumptions(const ProblemSpec& spec, int sample_count,
                                      unsigned seed) {
  AssumptionReport rep;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double C0 = spec.hamiltonian.C0;
  const int d = spec.dim;

  auto push = [&rep](const std::string& id, double worst, const std::string& note = "") {
    rep.checks.push_back({id, worst >= 0.0, worst, note});
  };

  // H1: eigenvalues of M in [1/C0, C0]
  {
    Eigen::SelfAdjointEigenSolver<MatX> es(spec.hamiltonian.M);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    const double sym = (spec.hamiltonian.M - spec.hamiltonian.M.transpose()).norm();
    double worst = std::min(lo - 1.0 / C0, C0 - hi);
    if (sym > 1e-14) worst = -1.0;
    push("H1", worst);
  }
  // H2: D_pH.p - 2H + C0 = 2V(x) + C0 >= 0
  {
    double worst = 1e300;
    for (int i = 0; i < sample_count; ++i) {
      const auto x = random_point(d, rng);
      worst = std::min(worst, 2.0 * spec.hamiltonian.V.value(x) + C0);
    }
    push("H2", worst);
  }
  // H3, HX: identically satisfied for the quadratic separable family
  push("H3", 0.0, "third p-derivatives vanish for quadratic H");
  push("HX", 0.0, "mixed x-p derivatives vanish for separable H");

  // F: f0 strictly increasing on sampled m
  {
    double worst = 1e300;
    for (int i = 0; i < sample_count; ++i) {
      const double m = std::exp(6.0 * (unit(rng) - 0.5));  // m in [e^-3, e^3]
      worst = std::min(worst, spec.coupling.f0.slope(m));
    }
    push("F", worst);
  }
  // F1: liminf m f_m > 0 as m -> inf, exact per family
  {
    double lim = spec.coupling.f0.log_coef();
    for (const auto& t : spec.coupling.f0.powers())
      if (t.coef > 0.0 && t.exponent > 0.0) lim = 1e300;
    push("F1", lim > 0.0 ? lim : -1.0, "analytic limit of m f_m");
  }
  // F2: |chi_w| <= C0 on sampled w
  {
    double worst = 1e300;
    for (int i = 0; i < sample_count; ++i) {
      const double w = -10.0 + 20.0 * unit(rng);
      if (w <= spec.coupling.f0.lower_limit()) continue;
      const double m = spec.coupling.f0.inverse(w);
      worst = std::min(worst, C0 - std::abs(spec.coupling.f0.m_slope_w(m)));
    }
    push("F2", worst);
  }
  // FX1: m (D_x f)_m = 0 identically (F does not depend on m)
  push("FX1", 0.0, "spatial offset is m-independent");
  // FX2: |D_x F|, |D^2_x F| <= C0 (the sampled proxy with |f| term dropped)
  {
    double worst = 1e300;
    for (int i = 0; i < sample_count; ++i) {
      const auto x = random_point(d, rng);
      const auto g = spec.coupling.F.gradient(x);
      const auto h = spec.coupling.F.hessian(x);
      double mag = 0.0;
      for (int a = 0; a < d; ++a) {
        mag = std::max(mag, std::abs(g[a]));
        for (int bb = 0; bb < d; ++bb) mag = std::max(mag, std::abs(h[a][bb]));
      }
      worst = std::min(worst, C0 - mag);
    }
    push("FX2", worst);
  }
  // G: g0 strictly increasing
  {
    double worst = 1e300;
    for (int i = 0; i < sample_count; ++i) {
      const double m = std::exp(6.0 * (unit(rng) - 0.5));
      worst = std::min(worst, spec.terminal.g0.slope(m));
    }
    push("G", worst);
  }
  // GX proxy: bounded offset G and g0 covering its limit values
  {
    const double osc = spec.terminal.G.max_value() - spec.terminal.G.min_value();
    push("GX", std::isfinite(osc) ? 0.0 : -1.0, "separable proxy: bounded offset");
  }
  // DE extra condition: g(.,0) > -inf
  if (!spec.strictly_elliptic()) {
    const bool ok = !spec.terminal.g0.has_log();
    push("E-DE-g", ok ? 0.0 : -1.0, "terminal cost finite at m=0 under degenerate ellipticity");
  }
  // M1: m0 > 0 and unit mass
  {
    const double mn = spec.initial.m0.min_value();
    const double mass = spec.initial.m0.mean();  // exact for trig polynomials
    const bool ok = mn > 0.0 && std::abs(mass - 1.0) <= 1e-12;
    push("M1", ok ? std::min(mn, 1.0) : -1.0);
  }
  return rep;
}

ProblemSpec blend_theta(const ProblemSpec& spec, double theta) {
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("blend_theta: theta outside [0,1]");
  ProblemSpec out = spec;

  // H^theta = theta (p.Mp/2 - V) + (1-theta)(|p|^2/2 + f0(1) + F(x))
  //         = p.M^theta p/2 - V^theta,  V^theta = theta V - (1-theta)(f0(1) + F)
  const int d = spec.dim;
  out.hamiltonian.M = theta * spec.hamiltonian.M + (1.0 - theta) * MatX::Identity(d, d);
  TrigPoly neg_f1 = spec.coupling.F;  // f(x,1) = f0(1) + F(x)
  neg_f1.set_constant(neg_f1.constant() + spec.coupling.f0.value(1.0));
  out.hamiltonian.V = TrigPoly::blend(theta, spec.hamiltonian.V, -(1.0 - theta), neg_f1);

  // g^theta(x,m) = theta g0(m) + (1-theta) m + theta G(x)
  MonotoneFn g0t;
  for (const auto& t : spec.terminal.g0.powers()) g0t.add_power(theta * t.coef, t.exponent);
  if (spec.terminal.g0.log_coef() != 0.0) g0t.add_log(theta * spec.terminal.g0.log_coef());
  g0t.add_power(1.0 - theta, 1.0);
  out.terminal.g0 = g0t;
  out.terminal.G = spec.terminal.G.scaled(theta);

  // m0^theta = theta m0 + (1-theta)
  out.initial.m0 = TrigPoly::blend(theta, spec.initial.m0, 1.0 - theta, TrigPoly(d, 1.0));
  return out;
}

ProblemSpec with_viscosity(const ProblemSpec& spec, double eps) {
  ProblemSpec out = spec;
  if (eps != 0.0) out.coupling.f0.add_log(eps);
  return out;
}

}  // namespace mfg
