#include "mfg/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace mfg {

namespace {

void add_row(std::vector<Eigen::Triplet<double>>& trips, int row, const Stencil& st,
             double factor) {
  if (factor == 0.0) return;
  for (const auto& e : st) trips.emplace_back(row, e.node, factor * e.w);
}

double inf_norm(const Eigen::VectorXd& v) { return v.lpNorm<Eigen::Infinity>(); }

}  // namespace

void assemble_residual_and_jacobian(const ProblemSpec& spec, const SpaceTimeField& u,
                                    Eigen::VectorXd& F, SparseMat* J) {
  const GridSpec& g = u.grid;
  const int d = g.dim;
  const int n = g.n_nodes();
  F.resize(n);
  std::vector<Eigen::Triplet<double>> trips;
  if (J) trips.reserve(static_cast<size_t>(n) * 16);

  VecX p(d);
  double s = 0.0;
  for (int j = 0; j <= g.Nt; ++j) {
    const bool boundary = (j == 0 || j == g.Nt);
    for (int i = 0; i < g.n_space(); ++i) {
      const int row = g.index(i, j);
      const Point x = g.x_of(i);
      gradient_at(u, i, j, p, s);
      try {
        if (boundary) {
          const auto bb = assemble_boundary(spec, x, j == g.Nt, u.values[row], p, s);
          F[row] = bb.B;
          if (J) {
            if (bb.dB_dz != 0.0) trips.emplace_back(row, row, bb.dB_dz);
            for (int a = 0; a < d; ++a)
              add_row(trips, row, gradient_x_stencil(g, i, j, a), bb.dB_dq[a]);
            add_row(trips, row, gradient_t_stencil(g, i, j), bb.dB_dq[d]);
          }
        } else {
          const MatQ hess = hessian_at(u, i, j);
          const auto cb = assemble_coefficients(spec, x, p, s);
          F[row] = -(cb.A * hess).trace() + cb.b;
          if (J) {
            // second-derivative channels; symmetric entries counted once with
            // the doubled weight
            for (int k = 0; k <= d; ++k)
              for (int l = k; l <= d; ++l) {
                const double factor = (k == l) ? -cb.A(k, k) : -2.0 * cb.A(k, l);
                add_row(trips, row, hessian_stencil_entry(g, i, j, k, l), factor);
              }
            // first-derivative channels through the coefficients
            for (int k = 0; k <= d; ++k) {
              const double dR = -(cb.dA_dq[k] * hess).trace() + cb.db_dq[k];
              const Stencil st =
                  (k < d) ? gradient_x_stencil(g, i, j, k) : gradient_t_stencil(g, i, j);
              add_row(trips, row, st, dR);
            }
          }
        }
      } catch (const DomainError& e) {
        throw DomainError(e.what(), row);
      }
    }
  }
  if (J) {
    J->resize(n, n);
    J->setFromTriplets(trips.begin(), trips.end());
  }
}

NewtonResult newton_solve(const ProblemSpec& spec, const SpaceTimeField& u0,
                          const NewtonSettings& settings) {
  NewtonResult out;
  out.u = u0;

  Eigen::VectorXd F;
  SparseMat J;
  Eigen::SparseLU<SparseMat> lu;

  try {
    assemble_residual_and_jacobian(spec, out.u, F, &J);
  } catch (const DomainError&) {
    out.status = SolveStatus::domain_failure;
    return out;
  }
  out.residual_history.push_back(inf_norm(F));

  for (int it = 0; it < settings.max_iters; ++it) {
    if (out.residual_history.back() <= settings.abs_tol) {
      out.status = SolveStatus::converged;
      return out;
    }
    lu.compute(J);
    if (lu.info() != Eigen::Success) {
      out.status = SolveStatus::stalled;
      return out;
    }
    const Eigen::VectorXd delta = lu.solve(-F);

    // Armijo backtracking on phi = ||F||_2^2 / 2; a domain violation along the
    // trial counts as a rejected step
    const double phi0 = 0.5 * F.squaredNorm();
    double alpha = 1.0;
    bool accepted = false;
    SpaceTimeField trial = out.u;
    Eigen::VectorXd F_trial;
    while (alpha >= settings.min_step) {
      for (int k = 0; k < (int)trial.values.size(); ++k)
        trial.values[k] = out.u.values[k] + alpha * delta[k];
      try {
        assemble_residual_and_jacobian(spec, trial, F_trial, nullptr);
        const double phi = 0.5 * F_trial.squaredNorm();
        if (phi <= phi0 * (1.0 - 2.0 * settings.armijo_c * alpha)) {
          accepted = true;
          break;
        }
      } catch (const DomainError&) {
        // fall through to a shorter step
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      out.status = SolveStatus::stalled;
      return out;
    }
    out.u = trial;
    ++out.iterations;
    try {
      assemble_residual_and_jacobian(spec, out.u, F, &J);
    } catch (const DomainError&) {
      out.status = SolveStatus::domain_failure;
      return out;
    }
    out.residual_history.push_back(inf_norm(F));
  }
  out.status = out.residual_history.back() <= settings.abs_tol ? SolveStatus::converged
                                                               : SolveStatus::stalled;
  return out;
}

SpaceTimeField recover_density(const ProblemSpec& spec, const SpaceTimeField& u) {
  const GridSpec& g = u.grid;
  SpaceTimeField m(g);
  VecX p(g.dim);
  double s = 0.0;
  for (int j = 0; j <= g.Nt; ++j)
    for (int i = 0; i < g.n_space(); ++i) {
      const Point x = g.x_of(i);
      gradient_at(u, i, j, p, s);
      const double w = -s + spec.hamiltonian.value(x, p);
      try {
        m.at(i, j) = spec.coupling.inverse(x, w);
      } catch (const DomainError& e) {
        throw DomainError(e.what(), g.index(i, j));
      }
    }
  return m;
}

namespace {

double l2_qt_distance(const SpaceTimeField& a, const SpaceTimeField& b) {
  SpaceTimeField diff(a.grid);
  for (size_t k = 0; k < diff.values.size(); ++k) {
    const double e = a.values[k] - b.values[k];
    diff.values[k] = e * e;
  }
  return std::sqrt(integrate_cylinder(diff));
}

}  // namespace

SolveReport continuation_solve(const ProblemSpec& spec, const GridSpec& grid,
                               const NewtonSettings& newton,
                               const ContinuationSettings& cont) {
  SolveReport rep;
  const bool degenerate = !spec.strictly_elliptic();
  double eps = degenerate ? cont.epsilon0 : 0.0;
  const ProblemSpec base = degenerate ? with_viscosity(spec, eps) : spec;

  SpaceTimeField u(grid, 1.0);

  // theta march, starting from the trivial problem whose solution seeds it
  double theta = 0.0;
  double step = 1.0 / cont.theta_steps;
  {
    const auto res = newton_solve(blend_theta(base, 0.0), u, newton);
    if (res.status != SolveStatus::converged) {
      rep.status = res.status;
      rep.u = u;
      rep.message = "theta = 0 solve failed";
      return rep;
    }
    u = res.u;
    rep.path.push_back({0.0, eps, res.iterations, res.residual_history.back(),
                        res.residual_history});
  }
  while (theta < 1.0) {
    const double trial = std::min(1.0, theta + step);
    const auto res = newton_solve(blend_theta(base, trial), u, newton);
    if (res.status == SolveStatus::converged) {
      theta = trial;
      u = res.u;
      rep.path.push_back({theta, eps, res.iterations, res.residual_history.back(),
                          res.residual_history});
      if (res.iterations <= 3) step = std::min(2.0 * step, cont.theta_max_step);
    } else {
      step *= 0.5;
      if (step < cont.theta_min_step) {
        rep.status = res.status;
        rep.u = u;
        rep.m = recover_density(blend_theta(base, theta), u);
        rep.message = "theta continuation stalled at theta = " + std::to_string(theta);
        return rep;
      }
    }
  }

  ProblemSpec current = base;
  if (degenerate) {
    rep.epsilon_values.push_back(eps);
    SpaceTimeField m_prev = recover_density(current, u);
    rep.eps_u.push_back(u);
    rep.eps_m.push_back(m_prev);
    while (eps > cont.epsilon_floor) {
      const double eps_next = eps * cont.epsilon_ratio;
      const ProblemSpec prob = with_viscosity(spec, eps_next);
      const auto res = newton_solve(prob, u, newton);
      if (res.status != SolveStatus::converged) {
        rep.status = res.status;
        rep.message = "epsilon step to " + std::to_string(eps_next) + " failed";
        break;
      }
      eps = eps_next;
      current = prob;
      u = res.u;
      rep.path.push_back({1.0, eps, res.iterations, res.residual_history.back(),
                          res.residual_history});
      rep.epsilon_values.push_back(eps);
      const SpaceTimeField m_now = recover_density(current, u);
      rep.cauchy_increments.push_back(l2_qt_distance(m_now, m_prev));
      rep.eps_u.push_back(u);
      rep.eps_m.push_back(m_now);
      m_prev = m_now;
      if (rep.cauchy_increments.back() <= cont.cauchy_tol) {
        rep.cauchy_reached = true;
        break;
      }
    }
  }

  rep.u = u;
  rep.m = recover_density(current, u);
  if (rep.message.empty()) rep.message = "ok";
  return rep;
}

}  // namespace mfg
