#pragma once

#include "mfg/model.hpp"

// Benchmark problems used across tests, selftest, and the shipped configs.

namespace mfg::presets {

// f = m, g = m, H = p^2/2, m0 = 1, T = 1; closed-form solution u = 1 + (T-t)
inline ProblemSpec constant_data() {
  ProblemSpec s;
  s.dim = 1;
  s.T = 1.0;
  s.hamiltonian.dim = 1;
  s.coupling.f0 = MonotoneFn::power(1.0, 1.0);
  s.terminal.g0 = MonotoneFn::power(1.0, 1.0);
  s.initial.m0 = TrigPoly(1, 1.0);
  return s;
}

// strictly elliptic benchmark: f = m + log m, g = m, H = p^2/2 - 0.1 cos 2 pi x,
// m0 = 1 + 0.3 cos 2 pi x, T = 1
inline ProblemSpec se_benchmark() {
  ProblemSpec s = constant_data();
  s.coupling.f0 = MonotoneFn::power_log(1.0, 1.0, 1.0);
  s.hamiltonian.V = TrigPoly(1, 0.0);
  s.hamiltonian.V.add({1, 0}, 0.1);
  s.initial.m0 = TrigPoly(1, 1.0);
  s.initial.m0.add({1, 0}, 0.3);
  return s;
}

// x-independent variant of the benchmark (H = p^2/2), same m0
inline ProblemSpec se_benchmark_xindep() {
  ProblemSpec s = se_benchmark();
  s.hamiltonian.V = TrigPoly::zero(1);
  return s;
}

// degenerate benchmark: f = m, g = m, H = p^2/2, m0 = 1 + 0.3 cos 2 pi x
inline ProblemSpec de_power() {
  ProblemSpec s = constant_data();
  s.initial.m0 = TrigPoly(1, 1.0);
  s.initial.m0.add({1, 0}, 0.3);
  return s;
}

}  // namespace mfg::presets
