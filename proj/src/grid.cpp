#include "mfg/grid.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace mfg {

Stencil gradient_x_stencil(const GridSpec& g, int i, int j, int a) {
  auto c = g.coords(i);
  auto cp = c, cm = c;
  cp[a] += 1;
  cm[a] -= 1;
  const double h = 1.0 / (2.0 * g.dx());
  return {{g.index(g.flat(cp), j), h}, {g.index(g.flat(cm), j), -h}};
}

Stencil gradient_t_stencil(const GridSpec& g, int i, int j) {
  assert(g.Nt >= 4);
  const double h = 1.0 / (2.0 * g.dt());
  const double h12 = 1.0 / (12.0 * g.dt());
  if (j == 0)
    return {{g.index(i, 0), -25.0 * h12}, {g.index(i, 1), 48.0 * h12},
            {g.index(i, 2), -36.0 * h12}, {g.index(i, 3), 16.0 * h12},
            {g.index(i, 4), -3.0 * h12}};
  if (j == g.Nt)
    return {{g.index(i, j), 25.0 * h12}, {g.index(i, j - 1), -48.0 * h12},
            {g.index(i, j - 2), 36.0 * h12}, {g.index(i, j - 3), -16.0 * h12},
            {g.index(i, j - 4), 3.0 * h12}};
  return {{g.index(i, j + 1), h}, {g.index(i, j - 1), -h}};
}

Stencil hessian_stencil_entry(const GridSpec& g, int i, int j, int k, int l) {
  assert(j >= 1 && j <= g.Nt - 1);
  const int d = g.dim;
  auto c = g.coords(i);
  if (k == d && l == d) {
    const double h = 1.0 / (g.dt() * g.dt());
    return {{g.index(i, j + 1), h}, {g.index(i, j), -2.0 * h}, {g.index(i, j - 1), h}};
  }
  if (k < d && l < d && k == l) {
    auto cp = c, cm = c;
    cp[k] += 1;
    cm[k] -= 1;
    const double h = 1.0 / (g.dx() * g.dx());
    return {{g.index(g.flat(cp), j), h}, {g.index(i, j), -2.0 * h}, {g.index(g.flat(cm), j), h}};
  }
  if (k < d && l < d) {
    // mixed x-y, four-point cross
    auto cpp = c, cpm = c, cmp = c, cmm = c;
    cpp[k] += 1, cpp[l] += 1;
    cpm[k] += 1, cpm[l] -= 1;
    cmp[k] -= 1, cmp[l] += 1;
    cmm[k] -= 1, cmm[l] -= 1;
    const double h = 1.0 / (4.0 * g.dx() * g.dx());
    return {{g.index(g.flat(cpp), j), h},
            {g.index(g.flat(cpm), j), -h},
            {g.index(g.flat(cmp), j), -h},
            {g.index(g.flat(cmm), j), h}};
  }
  // mixed x-t
  const int a = (k < d) ? k : l;
  auto cp = c, cm = c;
  cp[a] += 1;
  cm[a] -= 1;
  const double h = 1.0 / (4.0 * g.dx() * g.dt());
  return {{g.index(g.flat(cp), j + 1), h},
          {g.index(g.flat(cp), j - 1), -h},
          {g.index(g.flat(cm), j + 1), -h},
          {g.index(g.flat(cm), j - 1), h}};
}

void gradient_at(const SpaceTimeField& u, int i, int j, VecX& p, double& s) {
  const auto& g = u.grid;
  p.resize(g.dim);
  for (int a = 0; a < g.dim; ++a) {
    double v = 0.0;
    for (const auto& e : gradient_x_stencil(g, i, j, a)) v += e.w * u.values[e.node];
    p[a] = v;
  }
  s = 0.0;
  for (const auto& e : gradient_t_stencil(g, i, j)) s += e.w * u.values[e.node];
}

MatQ hessian_at(const SpaceTimeField& u, int i, int j) {
  const auto& g = u.grid;
  if (j < 1 || j > g.Nt - 1)
    throw std::logic_error("hessian_at: called at a temporal boundary node");
  const int n = g.dim + 1;
  MatQ H(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      double v = 0.0;
      for (const auto& e : hessian_stencil_entry(g, i, j, k, l)) v += e.w * u.values[e.node];
      H(k, l) = v;
      H(l, k) = v;
    }
  return H;
}

double integrate_cylinder(const SpaceTimeField& v) {
  const auto& g = v.grid;
  const double cell = (g.dim == 1) ? g.dx() : g.dx() * g.dx();
  double total = 0.0;
  for (int j = 0; j <= g.Nt; ++j) {
    double slice = 0.0;
    for (int i = 0; i < g.n_space(); ++i) slice += v.at(i, j);
    const double wt = (j == 0 || j == g.Nt) ? 0.5 : 1.0;
    total += wt * slice;
  }
  return total * cell * g.dt();
}

double integrate_slice(const GridSpec& g, const std::vector<double>& slice_values) {
  const double cell = (g.dim == 1) ? g.dx() : g.dx() * g.dx();
  double s = 0.0;
  for (double v : slice_values) s += v;
  return s * cell;
}

std::vector<double> time_slice(const SpaceTimeField& v, int j) {
  std::vector<double> s(v.grid.n_space());
  for (int i = 0; i < v.grid.n_space(); ++i) s[i] = v.at(i, j);
  return s;
}

void dump_csv(const std::string& path, const GridSpec& g,
              const std::vector<const SpaceTimeField*>& fields,
              const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_csv: cannot open " + path);
  out << std::setprecision(17);
  out << (g.dim == 1 ? "x" : "x,y") << ",t";
  for (const auto& n : names) out << "," << n;
  out << "\n";
  for (int j = 0; j <= g.Nt; ++j)
    for (int i = 0; i < g.n_space(); ++i) {
      const auto x = g.x_of(i);
      out << x[0];
      if (g.dim == 2) out << "," << x[1];
      out << "," << j * g.dt();
      for (const auto* f : fields) out << "," << f->at(i, j);
      out << "\n";
    }
}

std::vector<SpaceTimeField> load_csv(const std::string& path, const GridSpec& g,
                                     int n_fields) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<SpaceTimeField> fields(n_fields, SpaceTimeField(g));
  const int coord_cols = g.dim + 1;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= g.n_nodes()) throw std::runtime_error("load_csv: too many rows for grid");
    std::stringstream ss(line);
    std::string cell;
    for (int c = 0; c < coord_cols; ++c)
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("load_csv: short row");
    for (int f = 0; f < n_fields; ++f) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("load_csv: short row");
      fields[f].values[row] = std::stod(cell);
    }
    ++row;
  }
  if (row != g.n_nodes()) throw std::runtime_error("load_csv: row count does not match grid");
  return fields;
}

}  // namespace mfg
