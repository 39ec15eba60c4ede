#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfg {

// Domain violation in an evaluator (e.g. coupling inverse asked for a value
// below the range of f(x,.)). Carries the offending grid node when raised
// during assembly so the line search can react.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what, int node = -1)
      : std::runtime_error(what), node_(node) {}
  int node() const { return node_; }

private:
  int node_;
};

// Strictly increasing function of the density on (0, inf):
//   F(m) = sum_i coef_i * m^exp_i  +  log_coef * log(m),
// with coef_i > 0, exp_i > 0, log_coef >= 0, and at least one term present.
// Covers the supported coupling/terminal families and stays closed under the
// convex blending used by the homotopy (which introduces an extra linear term).
struct PowerTerm {
  double coef = 0.0;
  double exponent = 1.0;
};

class MonotoneFn {
public:
  MonotoneFn() = default;

  static MonotoneFn power(double a, double exponent) {
    MonotoneFn f;
    if (a != 0.0) f.powers_.push_back({a, exponent});
    return f;
  }
  static MonotoneFn logarithm(double b) {
    MonotoneFn f;
    f.log_coef_ = b;
    return f;
  }
  static MonotoneFn power_log(double a, double exponent, double b) {
    MonotoneFn f = power(a, exponent);
    f.log_coef_ = b;
    return f;
  }

  MonotoneFn& add_power(double a, double exponent) {
    if (a != 0.0) powers_.push_back({a, exponent});
    return *this;
  }
  MonotoneFn& add_log(double b) {
    log_coef_ += b;
    return *this;
  }

  const std::vector<PowerTerm>& powers() const { return powers_; }
  double log_coef() const { return log_coef_; }
  bool has_log() const { return log_coef_ > 0.0; }

  // Value at m -> 0+. Finite (zero) iff no log term.
  double lower_limit() const {
    return has_log() ? -std::numeric_limits<double>::infinity() : 0.0;
  }

  double value(double m) const {
    double v = 0.0;
    for (const auto& t : powers_) v += t.coef * std::pow(m, t.exponent);
    if (log_coef_ != 0.0) v += log_coef_ * std::log(m);
    return v;
  }

  // F'(m) > 0 for m > 0.
  double slope(double m) const {
    double v = 0.0;
    for (const auto& t : powers_) v += t.coef * t.exponent * std::pow(m, t.exponent - 1.0);
    if (log_coef_ != 0.0) v += log_coef_ / m;
    return v;
  }

  double curvature(double m) const {
    double v = 0.0;
    for (const auto& t : powers_)
      v += t.coef * t.exponent * (t.exponent - 1.0) * std::pow(m, t.exponent - 2.0);
    if (log_coef_ != 0.0) v -= log_coef_ / (m * m);
    return v;
  }

  // m F'(m), as a function of m. The degeneracy modulus chi(w) is this
  // evaluated at m = inverse(w).
  double m_slope(double m) const {
    double v = log_coef_;
    for (const auto& t : powers_) v += t.coef * t.exponent * std::pow(m, t.exponent);
    return v;
  }

  // d/dw of m F'(m) along w = F(m); the log term drops out exactly.
  double m_slope_w(double m) const {
    double num = 0.0;
    for (const auto& t : powers_)
      num += t.coef * t.exponent * t.exponent * std::pow(m, t.exponent - 1.0);
    return num / slope(m);
  }

  // Solve F(m) = w for m > 0. Closed form for single-term families,
  // safeguarded Newton + bisection otherwise.
  double inverse(double w) const {
    if (w <= lower_limit())
      throw DomainError("coupling inverse: value below range (w=" + std::to_string(w) + ")");
    if (powers_.empty()) return std::exp(w / log_coef_);
    if (powers_.size() == 1 && log_coef_ == 0.0) {
      const auto& t = powers_.front();
      return std::pow(w / t.coef, 1.0 / t.exponent);
    }
    return inverse_bracketed(w);
  }

private:
  double inverse_bracketed(double w) const {
    double lo = 1.0, hi = 1.0;
    int guard = 0;
    while (value(lo) > w) {
      lo *= 0.5;
      if (++guard > 4000) throw DomainError("coupling inverse: bracket expansion failed (low)");
    }
    guard = 0;
    while (value(hi) < w) {
      hi *= 2.0;
      if (++guard > 4000) throw DomainError("coupling inverse: bracket expansion failed (high)");
    }
    double m = 0.5 * (lo + hi);
    const double tol = 1e-13 * (1.0 + std::abs(w));
    for (int it = 0; it < 200; ++it) {
      const double r = value(m) - w;
      if (std::abs(r) <= tol) return m;
      if (r > 0.0)
        hi = m;
      else
        lo = m;
      const double step = r / slope(m);
      double next = m - step;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      m = next;
    }
    if (std::abs(value(m) - w) <= 10.0 * tol) return m;
    throw DomainError("coupling inverse: root-find did not converge");
  }

  std::vector<PowerTerm> powers_;
  double log_coef_ = 0.0;
};

}  // namespace mfg
