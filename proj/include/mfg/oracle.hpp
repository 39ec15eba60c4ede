#pragma once

#include <Eigen/Dense>

#include "mfg/grid.hpp"
#include "mfg/model.hpp"

namespace mfg {

// Deliberately simple reference solver for the original coupled system on
// tiny grids: unknowns (u, m) jointly, dense finite-difference Jacobian.
// Independent of the reduced-equation assembly by construction.
struct CoupledState {
  SpaceTimeField u;
  SpaceTimeField m;

  CoupledState() = default;
  CoupledState(const GridSpec& g, double u_fill, double m_fill)
      : u(g, u_fill), m(g, m_fill) {}
};

enum class OracleStatus { converged, stalled, domain_failure };

struct OracleResult {
  CoupledState state;
  OracleStatus status = OracleStatus::converged;
  int iterations = 0;
  double final_residual = 0.0;
};

// Rows: HJ at every node; FP (conservative centered) at interior times;
// m(.,0) = m0; u(.,T) = g(.,m(.,T)). Unknown layout: all of u, then all of m.
Eigen::VectorXd coupled_residual(const ProblemSpec& spec, const CoupledState& state);

OracleResult coupled_solve(const ProblemSpec& spec, const CoupledState& initial,
                           double abs_tol = 1e-10, int max_iters = 50);

}  // namespace mfg
