#pragma once

#include <array>
#include <cassert>
#include <string>
#include <vector>

#include "mfg/model.hpp"

namespace mfg {

// Uniform node-centered grid on T^d x [0,T], periodic in space.
// Nodes (i, j) -> (x_i, t_j) = (i dx, j dt), i modulo Nx per dimension,
// j in {0,...,Nt}. Unknown ordering is time-major, then lexicographic space.
struct GridSpec {
  int dim = 1;
  int Nx = 16;
  int Nt = 8;
  double T = 1.0;

  double dx() const { return 1.0 / Nx; }
  double dt() const { return T / Nt; }
  int n_space() const { return dim == 1 ? Nx : Nx * Nx; }
  int n_nodes() const { return n_space() * (Nt + 1); }

  int index(int i, int j) const { return j * n_space() + i; }
  int spatial_of(int node) const { return node % n_space(); }
  int time_of(int node) const { return node / n_space(); }

  // flattened spatial index from per-dimension indices (taken modulo Nx)
  int flat(std::array<int, 2> ix) const {
    auto wrap = [this](int k) { return ((k % Nx) + Nx) % Nx; };
    return dim == 1 ? wrap(ix[0]) : wrap(ix[0]) * Nx + wrap(ix[1]);
  }
  std::array<int, 2> coords(int i) const {
    return dim == 1 ? std::array<int, 2>{i, 0} : std::array<int, 2>{i / Nx, i % Nx};
  }
  Point x_of(int i) const {
    auto c = coords(i);
    return {c[0] * dx(), c[1] * dx()};
  }

  bool operator==(const GridSpec& o) const {
    return dim == o.dim && Nx == o.Nx && Nt == o.Nt && T == o.T;
  }
};

struct SpaceTimeField {
  GridSpec grid;
  std::vector<double> values;

  SpaceTimeField() = default;
  explicit SpaceTimeField(const GridSpec& g, double fill = 0.0)
      : grid(g), values(g.n_nodes(), fill) {}

  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }
};

// One term of a linear stencil: (node index, weight).
struct StencilEntry {
  int node;
  double w;
};
using Stencil = std::vector<StencilEntry>;

// First derivative along spatial dimension a at node (i,j): centered, periodic.
Stencil gradient_x_stencil(const GridSpec& g, int i, int j, int a);
// Time derivative at (i,j): centered at interior times, fourth-order one-sided
// at j = 0 and j = Nt (the boundary rows sit inside the initial transient
// layer, where a wider stencil buys a lot of accuracy). Needs Nt >= 4.
Stencil gradient_t_stencil(const GridSpec& g, int i, int j);
// Second-derivative entry (k,l) of the (d+1)x(d+1) space-time Hessian at an
// interior time. k,l in {0..d-1} spatial, k or l == d is the time direction.
Stencil hessian_stencil_entry(const GridSpec& g, int i, int j, int k, int l);

// Evaluated stencils.
void gradient_at(const SpaceTimeField& u, int i, int j, VecX& p, double& s);
MatQ hessian_at(const SpaceTimeField& u, int i, int j);

// Trapezoidal-in-time, uniform-in-space quadrature.
double integrate_cylinder(const SpaceTimeField& v);
double integrate_slice(const GridSpec& g, const std::vector<double>& slice_values);
std::vector<double> time_slice(const SpaceTimeField& v, int j);

// CSV dump format: columns x [, y], t, value per field column; row order
// follows the node index.
void dump_csv(const std::string& path, const GridSpec& g,
              const std::vector<const SpaceTimeField*>& fields,
              const std::vector<std::string>& names);
std::vector<SpaceTimeField> load_csv(const std::string& path, const GridSpec& g,
                                     int n_fields);

}  // namespace mfg
