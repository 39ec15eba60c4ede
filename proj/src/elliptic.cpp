#include "mfg/elliptic.hpp"

namespace mfg {

namespace {

// (D_pH, -1) as a (d+1)-vector
VecQ extended_gradient(const DerivativeBundle& db, int d) {
  VecQ v(d + 1);
  v.head(d) = db.dp_H;
  v[d] = -1.0;
  return v;
}

MatQ blockdiag_hpp(const MatX& Hpp, int d) {
  MatQ B = MatQ::Zero(d + 1, d + 1);
  B.topLeftCorner(d, d) = Hpp;
  return B;
}

}  // namespace

MatQ assemble_A(const ProblemSpec& spec, const Point& x, const VecX& p, double s) {
  const int d = spec.dim;
  const auto db = eval_derivative_bundle(spec, x, p, s);
  const VecQ v = extended_gradient(db, d);
  MatQ A = v * v.transpose();
  A += db.chi * blockdiag_hpp(db.dpp_H, d);
  return A;
}

double assemble_b(const ProblemSpec& spec, const Point& x, const VecX& p, double s) {
  const auto db = eval_derivative_bundle(spec, x, p, s);
  // tr(D^2_xp H) = 0 for the separable family; kept for form.
  return -db.dx_H.dot(db.dp_H) + db.dx_f.dot(db.dp_H);
}

CoefficientBundle assemble_coefficients(const ProblemSpec& spec, const Point& x,
                                        const VecX& p, double s) {
  const int d = spec.dim;
  const auto db = eval_derivative_bundle(spec, x, p, s);
  const VecQ v = extended_gradient(db, d);
  const MatQ Hpp_ext = blockdiag_hpp(db.dpp_H, d);

  CoefficientBundle out;
  out.A = v * v.transpose() + db.chi * Hpp_ext;
  out.b = -db.dx_H.dot(db.dp_H) + db.dx_f.dot(db.dp_H);

  out.dA_dq.resize(d + 1);
  out.db_dq = VecQ::Zero(d + 1);
  for (int k = 0; k < d; ++k) {
    // dv/dp_k = (M e_k, 0); dw/dp_k = dH/dp_k = (Mp)_k
    VecQ dv = VecQ::Zero(d + 1);
    dv.head(d) = db.dpp_H.col(k);
    out.dA_dq[k] = dv * v.transpose() + v * dv.transpose() +
                   db.chi_w * db.dp_H[k] * Hpp_ext;
    out.db_dq[k] = (-db.dx_H + db.dx_f).dot(db.dpp_H.col(k));
  }
  // d/ds: dv/ds = 0, dw/ds = -1
  out.dA_dq[d] = -db.chi_w * Hpp_ext;
  out.db_dq[d] = 0.0;  // D_xf is m-independent for the separable family
  return out;
}

BoundaryBundle assemble_boundary(const ProblemSpec& spec, const Point& x, bool terminal,
                                 double z, const VecX& p, double s) {
  const int d = spec.dim;
  BoundaryBundle out;
  out.terminal = terminal;
  out.dB_dq = VecQ::Zero(d + 1);
  if (!terminal) {
    const double H = spec.hamiltonian.value(x, p);
    out.B = -s + H - spec.coupling.value(x, spec.initial.value(x));
    out.dB_dq.head(d) = spec.hamiltonian.grad_p(p);
    out.dB_dq[d] = -1.0;
    out.dB_dz = 0.0;
    return out;
  }
  const auto db = eval_derivative_bundle(spec, x, p, s);
  const double g_over_f = spec.terminal.slope(db.m) / db.f_m;
  out.B = -spec.terminal.value(x, db.m) + z;
  out.dB_dz = 1.0;
  out.dB_dq.head(d) = -g_over_f * db.dp_H;
  out.dB_dq[d] = g_over_f;
  return out;
}

double residual_at_node(const ProblemSpec& spec, const Point& x, const VecX& p, double s,
                        const MatQ& hess) {
  const MatQ A = assemble_A(spec, x, p, s);
  return -(A * hess).trace() + assemble_b(spec, x, p, s);
}

}  // namespace mfg
