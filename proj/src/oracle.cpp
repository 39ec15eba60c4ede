#include "mfg/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace mfg {

namespace {

VecX spatial_gradient(const SpaceTimeField& u, int i, int j) {
  const auto& g = u.grid;
  VecX p(g.dim);
  for (int a = 0; a < g.dim; ++a) {
    double v = 0.0;
    for (const auto& e : gradient_x_stencil(g, i, j, a)) v += e.w * u.values[e.node];
    p[a] = v;
  }
  return p;
}

double time_derivative(const SpaceTimeField& u, int i, int j) {
  double v = 0.0;
  for (const auto& e : gradient_t_stencil(u.grid, i, j)) v += e.w * u.values[e.node];
  return v;
}

}  // namespace

Eigen::VectorXd coupled_residual(const ProblemSpec& spec, const CoupledState& state) {
  const auto& g = state.u.grid;
  const int n = g.n_nodes();
  Eigen::VectorXd F(2 * n);

  for (double mv : state.m.values)
    if (!(mv > 0.0)) throw DomainError("oracle: nonpositive density");

  for (int j = 0; j <= g.Nt; ++j)
    for (int i = 0; i < g.n_space(); ++i) {
      const int node = g.index(i, j);
      const Point x = g.x_of(i);
      const VecX p = spatial_gradient(state.u, i, j);
      F[node] = -time_derivative(state.u, i, j) + spec.hamiltonian.value(x, p) -
                spec.coupling.value(x, state.m.at(i, j));

      if (j == 0) {
        F[n + node] = state.m.at(i, 0) - spec.initial.value(x);
      } else if (j == g.Nt) {
        F[n + node] = state.u.at(i, g.Nt) - spec.terminal.value(x, state.m.at(i, g.Nt));
      } else {
        const double mt = (state.m.at(i, j + 1) - state.m.at(i, j - 1)) / (2.0 * g.dt());
        double div = 0.0;
        auto c = g.coords(i);
        for (int a = 0; a < g.dim; ++a) {
          auto cp = c, cm = c;
          cp[a] += 1;
          cm[a] -= 1;
          const int ip = g.flat(cp), im = g.flat(cm);
          const double fp = state.m.at(ip, j) *
                            spec.hamiltonian.grad_p(spatial_gradient(state.u, ip, j))[a];
          const double fm = state.m.at(im, j) *
                            spec.hamiltonian.grad_p(spatial_gradient(state.u, im, j))[a];
          div += (fp - fm) / (2.0 * g.dx());
        }
        F[n + node] = mt - div;
      }
    }
  return F;
}

OracleResult coupled_solve(const ProblemSpec& spec, const CoupledState& initial,
                           double abs_tol, int max_iters) {
  const auto& g = initial.u.grid;
  if (g.dim != 1 || g.Nx > 32 || g.Nt > 16)
    throw std::invalid_argument("coupled_solve: oracle is restricted to d=1, Nx <= 32, Nt <= 16");
  const int n = g.n_nodes();

  OracleResult out;
  out.state = initial;

  auto pack_eval = [&](const Eigen::VectorXd& U) {
    CoupledState s(g, 0.0, 0.0);
    for (int k = 0; k < n; ++k) {
      s.u.values[k] = U[k];
      s.m.values[k] = U[n + k];
    }
    return coupled_residual(spec, s);
  };

  Eigen::VectorXd U(2 * n);
  for (int k = 0; k < n; ++k) {
    U[k] = out.state.u.values[k];
    U[n + k] = out.state.m.values[k];
  }

  Eigen::VectorXd F;
  try {
    F = pack_eval(U);
  } catch (const DomainError&) {
    out.status = OracleStatus::domain_failure;
    return out;
  }

  for (int it = 0; it < max_iters; ++it) {
    out.final_residual = F.lpNorm<Eigen::Infinity>();
    if (out.final_residual <= abs_tol) {
      out.status = OracleStatus::converged;
      break;
    }

    Eigen::MatrixXd J(2 * n, 2 * n);
    for (int col = 0; col < 2 * n; ++col) {
      const double h = 1e-7 * (1.0 + std::abs(U[col]));
      Eigen::VectorXd Up = U, Um = U;
      Up[col] += h;
      Um[col] -= h;
      try {
        J.col(col) = (pack_eval(Up) - pack_eval(Um)) / (2.0 * h);
      } catch (const DomainError&) {
        // one-sided fallback keeps the density positive
        Um[col] = U[col];
        J.col(col) = (pack_eval(Up) - pack_eval(Um)) / h;
      }
    }

    const Eigen::VectorXd delta = J.partialPivLu().solve(-F);
    const double phi0 = 0.5 * F.squaredNorm();
    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd F_trial;
    while (alpha >= 1e-10) {
      try {
        F_trial = pack_eval(U + alpha * delta);
        if (0.5 * F_trial.squaredNorm() <= phi0 * (1.0 - 2e-4 * alpha)) {
          accepted = true;
          break;
        }
      } catch (const DomainError&) {
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      out.status = OracleStatus::stalled;
      break;
    }
    U += alpha * delta;
    F = F_trial;
    ++out.iterations;
    out.status = OracleStatus::stalled;  // until the residual check says otherwise
  }
  out.final_residual = F.lpNorm<Eigen::Infinity>();
  if (out.final_residual <= abs_tol) out.status = OracleStatus::converged;

  for (int k = 0; k < n; ++k) {
    out.state.u.values[k] = U[k];
    out.state.m.values[k] = U[n + k];
  }
  return out;
}

}  // namespace mfg
