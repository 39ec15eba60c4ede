#pragma once

#include <vector>

#include "mfg/model.hpp"

namespace mfg {

// Pointwise coefficients of the reduced quasilinear equation
//   -tr(A(x,Du) D^2 u) + b(x,Du) = 0,
// with q = (p,s) = (D_x u, u_t), w = -s + H(x,p):
//   A = (D_pH,-1) (x) (D_pH,-1) + chi(x,w) blockdiag(D^2_pp H, 0)
//   b = -D_xH.D_pH + D_xf.D_pH - chi tr(D^2_xp H).
struct CoefficientBundle {
  MatQ A;
  double b = 0.0;
  std::vector<MatQ> dA_dq;  // d+1 matrices, last entry is d/ds
  VecQ db_dq;
};

// Boundary operator B and its derivatives at a temporal boundary node.
//   t=0: B = -s + H(x,p) - f(x, m0(x))
//   t=T: B = -g(x, f^{-1}(x,w)) + z
struct BoundaryBundle {
  double B = 0.0;
  double dB_dz = 0.0;
  VecQ dB_dq;
  bool terminal = false;  // side: false -> t=0, true -> t=T
};

MatQ assemble_A(const ProblemSpec& spec, const Point& x, const VecX& p, double s);
double assemble_b(const ProblemSpec& spec, const Point& x, const VecX& p, double s);
CoefficientBundle assemble_coefficients(const ProblemSpec& spec, const Point& x,
                                        const VecX& p, double s);
BoundaryBundle assemble_boundary(const ProblemSpec& spec, const Point& x, bool terminal,
                                 double z, const VecX& p, double s);

// Interior PDE residual -tr(A D^2u) + b at a state with given Hessian.
double residual_at_node(const ProblemSpec& spec, const Point& x, const VecX& p, double s,
                        const MatQ& hess);

}  // namespace mfg
