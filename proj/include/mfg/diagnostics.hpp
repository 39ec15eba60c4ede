#pragma once

#include <string>
#include <vector>

#include "mfg/grid.hpp"
#include "mfg/model.hpp"

namespace mfg {

// One named check. Non-gating entries are measurements: recorded, never
// failing a run. `applicable == false` marks a skipped check (wrong regime).
struct CheckEntry {
  std::string id;
  bool applicable = true;
  bool gating = true;
  bool pass = true;
  double measured = 0.0;
  double bound = 0.0;
  double tol = 0.0;
  std::string note;
};

struct DiagnosticsReport {
  GridSpec grid;
  double epsilon = 0.0;
  std::vector<CheckEntry> entries;

  CheckEntry& add(const CheckEntry& e) {
    entries.push_back(e);
    return entries.back();
  }
  bool all_pass() const {
    for (const auto& e : entries)
      if (e.applicable && e.gating && !e.pass) return false;
    return true;
  }
  const CheckEntry* find(const std::string& id) const {
    for (const auto& e : entries)
      if (e.id == id) return &e;
    return nullptr;
  }
};

std::string serialize(const DiagnosticsReport& report);

// Continuity-equation residual in conservative centered form at interior
// times, discrete L2 over the cylinder, plus the worst per-slice mass drift.
struct FpCheck {
  double residual_l2 = 0.0;
  double mass_drift = 0.0;
};
FpCheck fp_residual(const ProblemSpec& spec, const SpaceTimeField& u,
                    const SpaceTimeField& m);

// Sharp envelope bounds on u and on the terminal density. With x-independent
// data the bounds gate at `tol`; otherwise the envelope quantities and the
// measured range are recorded for inspection only.
void check_solution_bounds(const ProblemSpec& spec, const SpaceTimeField& u,
                           const SpaceTimeField& m, double tol, DiagnosticsReport& report);

// Two-sided pointwise bound on u_t from the eta-window of the density.
void check_ut_bounds(const ProblemSpec& spec, const SpaceTimeField& u,
                     const SpaceTimeField& m, double tol, DiagnosticsReport& report);

// | int_Q m (H - D_pH.D_xu - f)  -  int (m_T g(.,m_T) - m0 u(.,0)) |
double energy_identity_residual(const ProblemSpec& spec, const SpaceTimeField& u,
                                const SpaceTimeField& m);

struct LasryLionsTerms {
  double M_ab = 0.0;  // convexity gap of H weighted by m_a
  double M_ba = 0.0;
  double M_g = 0.0;   // terminal monotonicity pairing
  double M_f = 0.0;   // coupling monotonicity pairing
  double sum() const { return M_ab + M_ba + M_g + M_f; }
};
// Cross-monotonicity terms between two solutions on the same grid. Uses the
// base coupling/terminal data (without any viscosity term), so every term is a
// positively weighted sum of pointwise-nonnegative quantities.
LasryLionsTerms lasry_lions_gap(const ProblemSpec& spec, const SpaceTimeField& u_a,
                                const SpaceTimeField& m_a, const SpaceTimeField& u_b,
                                const SpaceTimeField& m_b);

struct EpsSolution {
  double eps = 0.0;
  SpaceTimeField u;
  SpaceTimeField m;
};
// C1 uniform-boundedness proxy over a vanishing-viscosity sequence: the last
// four values of max-node |D_x u| must agree within 10%, and the Holder-1/2
// quotient of t -> m(.,t) in discrete H^{-1} is recorded.
void lipschitz_monitor(const ProblemSpec& spec, const std::vector<EpsSolution>& seq,
                       DiagnosticsReport& report);

// Nodewise -u_t + H - f(x,m) <= tol and terminal consistency
// |u(.,T) - g(.,m(.,T))| <= tol. `spec` carries the effective coupling.
void hj_inequality_check(const ProblemSpec& spec, const SpaceTimeField& u,
                         const SpaceTimeField& m, double tol, DiagnosticsReport& report);

// Discrete H^{-1} norm of a spatial slice: Fourier coefficients of modes
// k != 0 divided by 2 pi |k|, zero mode kept. Naive DFT.
double h_minus1_norm(const GridSpec& g, const std::vector<double>& slice);

// max over all nodes of the Euclidean norm of the space-time gradient (D_x u, u_t)
double max_gradient_norm(const SpaceTimeField& u);

// Standard bundle run by the CLI on a solve/verify. `tol` calibrates the
// gating bound checks; `eps` is the viscosity of the effective spec.
DiagnosticsReport run_diagnostics(const ProblemSpec& spec_effective,
                                  const ProblemSpec& spec_base, double eps,
                                  const SpaceTimeField& u, const SpaceTimeField& m,
                                  double tol);

}  // namespace mfg
