#pragma once

#include <Eigen/Sparse>
#include <optional>
#include <string>
#include <vector>

#include "mfg/elliptic.hpp"
#include "mfg/grid.hpp"

namespace mfg {

struct NewtonSettings {
  double abs_tol = 1e-10;        // on ||F||_inf
  int max_iters = 50;
  double armijo_c = 1e-4;
  double min_step = 1e-10;
  double linear_rel_tol = 1e-12;
};

struct ContinuationSettings {
  int theta_steps = 10;          // initial step count for the theta march
  double theta_min_step = 1e-4;
  double theta_max_step = 0.2;
  double epsilon0 = 1.0;
  double epsilon_ratio = 0.5;
  double epsilon_floor = 1e-6;
  double cauchy_tol = 1e-4;      // L2(Q_T) stop for the epsilon sequence
};

enum class SolveStatus { converged, stalled, domain_failure };

struct ContinuationStage {
  double theta = 0.0;
  double epsilon = 0.0;
  int newton_iters = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;
};

struct SolveReport {
  std::vector<ContinuationStage> path;
  SolveStatus status = SolveStatus::converged;
  SpaceTimeField u;
  SpaceTimeField m;  // density recovered from the final iterate
  // epsilon phase record: epsilon_values[k] pairs with eps_u/eps_m[k];
  // cauchy_increments[k-1] is the L2(Q_T) distance between densities k-1, k
  std::vector<double> epsilon_values;
  std::vector<double> cauchy_increments;
  std::vector<SpaceTimeField> eps_u;
  std::vector<SpaceTimeField> eps_m;
  bool cauchy_reached = false;
  std::string message;
};

struct NewtonResult {
  SpaceTimeField u;
  SolveStatus status = SolveStatus::converged;
  int iterations = 0;
  std::vector<double> residual_history;
};

using SparseMat = Eigen::SparseMatrix<double>;

// Residual F(U) (interior PDE rows + temporal boundary rows) and its exact
// analytic Jacobian. Throws DomainError (with the node) when an iterate leaves
// the chi-admissible set.
void assemble_residual_and_jacobian(const ProblemSpec& spec, const SpaceTimeField& u,
                                    Eigen::VectorXd& F, SparseMat* J);

NewtonResult newton_solve(const ProblemSpec& spec, const SpaceTimeField& u0,
                          const NewtonSettings& settings);

// Full solve: theta homotopy from the trivial problem, then (degenerate case
// only) the vanishing-viscosity epsilon sequence. `spec` is the target problem
// without any epsilon term.
SolveReport continuation_solve(const ProblemSpec& spec, const GridSpec& grid,
                               const NewtonSettings& newton,
                               const ContinuationSettings& cont);

// Density recovered from u through the coupling inverse at w = -u_t + H.
SpaceTimeField recover_density(const ProblemSpec& spec, const SpaceTimeField& u);

}  // namespace mfg
