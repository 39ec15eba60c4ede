#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "mfg/monotone.hpp"
#include "mfg/trigpoly.hpp"

namespace mfg {

using Point = std::array<double, 2>;  // torus point, first dim() entries used
using VecQ = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using MatQ = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using MatX = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;
using VecX = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;

// Separable Hamiltonian H(x,p) = (1/2) p.M p - V(x), M symmetric positive
// definite. C0 and tau are the assumption constants, user supplied.
struct HamiltonianSpec {
  int dim = 1;
  MatX M = MatX::Identity(1, 1);
  TrigPoly V = TrigPoly::zero(1);
  double C0 = 10.0;
  double tau = 0.0;

  double value(const Point& x, const VecX& p) const {
    return 0.5 * p.dot(M * p) - V.value(x);
  }
  VecX grad_p(const VecX& p) const { return M * p; }
  const MatX& hess_pp() const { return M; }
  VecX grad_x(const Point& x) const {
    auto g = V.gradient(x);
    VecX r(dim);
    for (int a = 0; a < dim; ++a) r[a] = -g[a];
    return r;
  }
};

// Coupling f(x,m) = f0(m) + F(x), f0 strictly increasing.
struct CouplingSpec {
  MonotoneFn f0;
  TrigPoly F = TrigPoly::zero(1);

  bool strictly_elliptic() const { return f0.has_log(); }

  double value(const Point& x, double m) const { return f0.value(m) + F.value(x); }
  double slope(double m) const { return f0.slope(m); }
  double inverse(const Point& x, double w) const { return f0.inverse(w - F.value(x)); }
  // chi(x,w) = m f_m evaluated at m = f^{-1}(x,w)
  double chi(const Point& x, double w) const { return f0.m_slope(f0.inverse(w - F.value(x))); }
};

// Terminal cost g(x,m) = g0(m) + G(x), g0 strictly increasing.
struct TerminalSpec {
  MonotoneFn g0;
  TrigPoly G = TrigPoly::zero(1);

  double value(const Point& x, double m) const { return g0.value(m) + G.value(x); }
  double slope(double m) const { return g0.slope(m); }
  double inverse(const Point& x, double w) const { return g0.inverse(w - G.value(x)); }
};

struct InitialDensitySpec {
  TrigPoly m0 = TrigPoly(1, 1.0);
  double value(const Point& x) const { return m0.value(x); }
};

struct ProblemSpec {
  int dim = 1;
  double T = 1.0;
  HamiltonianSpec hamiltonian;
  CouplingSpec coupling;
  TerminalSpec terminal;
  InitialDensitySpec initial;

  bool strictly_elliptic() const { return coupling.strictly_elliptic(); }
};

// All pointwise model values needed by the elliptic assembly at a state
// (x, p, s), where w = -s + H(x,p).
struct DerivativeBundle {
  double H = 0.0;
  VecX dp_H;
  MatX dpp_H;
  VecX dx_H;
  double w = 0.0;
  double m = 0.0;       // f^{-1}(x,w)
  double f_m = 0.0;     // slope of the coupling at m
  VecX dx_f;            // gradient of F (m-independent for separable data)
  double chi = 0.0;
  double chi_w = 0.0;
  double h = 0.0;       // sqrt(chi)
  double h_w = 0.0;
};

double eval_chi(const ProblemSpec& spec, const Point& x, double w);
double invert_coupling(const ProblemSpec& spec, const Point& x, double w);
DerivativeBundle eval_derivative_bundle(const ProblemSpec& spec, const Point& x,
                                        const VecX& p, double s);

// Envelopes f0_env(m) = f0(m) + min F etc. (section notation f_0, f_1, g_0, g_1).
struct Envelopes {
  double F_min = 0.0, F_max = 0.0, G_min = 0.0, G_max = 0.0;
  const MonotoneFn* f0 = nullptr;
  const MonotoneFn* g0 = nullptr;

  double f_lower(double m) const { return f0->value(m) + F_min; }
  double f_upper(double m) const { return f0->value(m) + F_max; }
  double g_lower(double m) const { return g0->value(m) + G_min; }
  double g_upper(double m) const { return g0->value(m) + G_max; }
};
Envelopes envelopes(const ProblemSpec& spec);

// One structural-assumption check: pass flag plus the worst margin seen
// (margin >= 0 means satisfied).
struct AssumptionCheck {
  std::string id;
  bool pass = true;
  double worst_margin = 0.0;
  std::string note;
};
struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const AssumptionCheck* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};
AssumptionReport validate_assumptions(const ProblemSpec& spec, int sample_count = 2000,
                                      unsigned seed = 1234);

// Homotopy blend: H^theta = theta H + (1-theta)(|p|^2/2 + f(x,1)),
// g^theta = theta g + (1-theta) m, m0^theta = theta m0 + (1-theta).
// The coupling is left unchanged.
ProblemSpec blend_theta(const ProblemSpec& spec, double theta);

// Viscous regularization: f -> f + eps log m.
ProblemSpec with_viscosity(const ProblemSpec& spec, double eps);

}  // namespace mfg
