#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace mfg {

// A real trigonometric polynomial on the unit torus T^d, d in {1,2}:
//   P(x) = c0 + sum_k [ a_k cos(2 pi k.x) + b_k sin(2 pi k.x) ].
// Used for potentials V, spatial offsets F, G and initial densities m0.
struct TrigTerm {
  std::array<int, 2> k{0, 0};
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

class TrigPoly {
public:
  TrigPoly() = default;
  explicit TrigPoly(int dim, double constant = 0.0) : dim_(dim), constant_(constant) {}

  static TrigPoly zero(int dim) { return TrigPoly(dim, 0.0); }

  TrigPoly& add(std::array<int, 2> k, double cos_coef, double sin_coef = 0.0) {
    terms_.push_back({k, cos_coef, sin_coef});
    return *this;
  }

  int dim() const { return dim_; }
  double constant() const { return constant_; }
  void set_constant(double c) { constant_ = c; }
  const std::vector<TrigTerm>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }

  double value(const std::array<double, 2>& x) const {
    double v = constant_;
    for (const auto& t : terms_) {
      const double ph = phase(t, x);
      v += t.cos_coef * std::cos(ph) + t.sin_coef * std::sin(ph);
    }
    return v;
  }

  std::array<double, 2> gradient(const std::array<double, 2>& x) const {
    std::array<double, 2> g{0.0, 0.0};
    for (const auto& t : terms_) {
      const double ph = phase(t, x);
      const double dc = -std::sin(ph), ds = std::cos(ph);
      for (int a = 0; a < dim_; ++a) {
        const double w = two_pi * t.k[a];
        g[a] += w * (t.cos_coef * dc + t.sin_coef * ds);
      }
    }
    return g;
  }

  std::array<std::array<double, 2>, 2> hessian(const std::array<double, 2>& x) const {
    std::array<std::array<double, 2>, 2> h{{{0.0, 0.0}, {0.0, 0.0}}};
    for (const auto& t : terms_) {
      const double ph = phase(t, x);
      const double dcc = -std::cos(ph), dss = -std::sin(ph);
      for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b) {
          const double w = two_pi * t.k[a] * two_pi * t.k[b];
          h[a][b] += w * (t.cos_coef * dcc + t.sin_coef * dss);
        }
    }
    return h;
  }

  // Mean over the torus (the k != 0 modes integrate to zero).
  double mean() const { return constant_; }

  // Extrema by dense sampling followed by local ternary refinement.
  double min_value() const { return extremum(false); }
  double max_value() const { return extremum(true); }

  // Linear combination a*this + b*other (same dim; terms are concatenated).
  static TrigPoly blend(double a, const TrigPoly& p, double b, const TrigPoly& q) {
    TrigPoly r(p.dim_, a * p.constant_ + b * q.constant_);
    for (auto t : p.terms_) {
      t.cos_coef *= a;
      t.sin_coef *= a;
      r.terms_.push_back(t);
    }
    for (auto t : q.terms_) {
      t.cos_coef *= b;
      t.sin_coef *= b;
      r.terms_.push_back(t);
    }
    return r;
  }

  TrigPoly scaled(double a) const { return blend(a, *this, 0.0, TrigPoly(dim_)); }

private:
  static constexpr double two_pi = 6.283185307179586476925286766559;

  double phase(const TrigTerm& t, const std::array<double, 2>& x) const {
    double ph = two_pi * t.k[0] * x[0];
    if (dim_ > 1) ph += two_pi * t.k[1] * x[1];
    return ph;
  }

  double extremum(bool want_max) const {
    if (terms_.empty()) return constant_;
    const double sign = want_max ? 1.0 : -1.0;
    double best = -1e300;
    std::array<double, 2> xbest{0.0, 0.0};
    const int n = (dim_ == 1) ? 4096 : 256;
    std::array<double, 2> x{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      x[0] = double(i) / n;
      const int m = (dim_ == 1) ? 1 : n;
      for (int j = 0; j < m; ++j) {
        x[1] = double(j) / n;
        const double v = sign * value(x);
        if (v > best) {
          best = v;
          xbest = x;
        }
      }
    }
    // coordinate-wise ternary refinement around the best sample
    double h = 1.0 / n;
    for (int it = 0; it < 200; ++it) {
      bool moved = false;
      for (int a = 0; a < dim_; ++a) {
        for (double step : {h, -h}) {
          auto xc = xbest;
          xc[a] += step;
          const double v = sign * value(xc);
          if (v > best) {
            best = v;
            xbest = xc;
            moved = true;
          }
        }
      }
      if (!moved) h *= 0.5;
      if (h < 1e-15) break;
    }
    return sign * best;
  }

  int dim_ = 1;
  double constant_ = 0.0;
  std::vector<TrigTerm> terms_;
};

}  // namespace mfg
