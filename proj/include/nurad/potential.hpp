#pragma once

// Inverse-polynomial potentials V(r) = A0 + sum_h A_{-h} r^{-h}: presets,
// landscape analysis (zeros and extrema) and the second-order expansion
// about r0 that turns the problem into an effective Coulomb form.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "nurad/error.hpp"
#include "nurad/polycubic.hpp"

namespace nurad {

class InversePolyPotential {
 public:
  InversePolyPotential() = default;

  /// inv_coeffs = {A_{-1}, A_{-2}, ..., A_{-H}}; H >= 1.
  InversePolyPotential(double a0, std::vector<double> inv_coeffs) : a0_(a0), inv_(std::move(inv_coeffs)) {
    if (inv_.empty()) throw Error(ErrorKind::invalid_input, "potential needs at least one inverse-power coefficient");
    if (!std::isfinite(a0_)) throw Error(ErrorKind::invalid_input, "A0 is not finite");
    for (double c : inv_)
      if (!std::isfinite(c)) throw Error(ErrorKind::invalid_input, "inverse-power coefficient is not finite");
  }

  double a0() const { return a0_; }
  const std::vector<double>& inv_coeffs() const { return inv_; }
  int h_max() const { return static_cast<int>(inv_.size()); }

  /// Coefficient of r^{-h}; zero beyond h_max. h = 0 gives A0.
  double coeff(int h) const {
    if (h == 0) return a0_;
    if (h < 0 || h > h_max()) return 0.0;
    return inv_[h - 1];
  }

  double operator()(double r) const { return evaluate(r); }

  double evaluate(double r) const {
    check_r(r);
    const double u = 1.0 / r;
    double acc = 0.0;
    for (auto it = inv_.rbegin(); it != inv_.rend(); ++it) acc = (acc + *it) * u;
    return a0_ + acc;
  }

  /// dV/dr, analytic.
  double derivative(double r) const {
    check_r(r);
    const double u = 1.0 / r;
    double acc = 0.0;
    for (int h = h_max(); h >= 1; --h) acc = (acc - h * inv_[h - 1]) * u;
    return acc * u;
  }

  /// Magnitude scale sum |A_{-h}| r^{-h} used for relative residuals.
  double value_scale(double r) const {
    double s = std::abs(a0_);
    for (int h = 1; h <= h_max(); ++h) s += std::abs(inv_[h - 1]) * std::pow(r, -h);
    return s;
  }

  double derivative_scale(double r) const {
    double s = 0.0;
    for (int h = 1; h <= h_max(); ++h) s += h * std::abs(inv_[h - 1]) * std::pow(r, -h - 1);
    return s;
  }

  double second_derivative_scale(double r) const {
    double s = 0.0;
    for (int h = 1; h <= h_max(); ++h) s += h * (h + 1) * std::abs(inv_[h - 1]) * std::pow(r, -h - 2);
    return s;
  }

  InversePolyPotential shifted(double delta) const { return InversePolyPotential(a0_ + delta, inv_); }

  friend InversePolyPotential operator+(const InversePolyPotential& x, const InversePolyPotential& y) {
    std::vector<double> c(std::max(x.inv_.size(), y.inv_.size()), 0.0);
    for (std::size_t i = 0; i < x.inv_.size(); ++i) c[i] += x.inv_[i];
    for (std::size_t i = 0; i < y.inv_.size(); ++i) c[i] += y.inv_[i];
    return InversePolyPotential(x.a0_ + y.a0_, std::move(c));
  }

 private:
  static void check_r(double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::domain, "potential evaluated at r <= 0");
  }

  double a0_ = 0.0;
  std::vector<double> inv_{0.0};
};

// ---------------------------------------------------------------- presets

/// alpha/r + A/r^2 + B/r^3 + C/r^4.
inline InversePolyPotential magnetic_potential(double alpha, double A, double B, double C) {
  return InversePolyPotential(0.0, {alpha, A, B, C});
}

/// k(k+1)/r^2 + eps 2(k+1)/r^3 + 1/r^4 with k = +-(j + 1/2), j half-integer.
inline InversePolyPotential neutrino_potential(double k, double eps) {
  if (!std::isfinite(k) || k != std::round(k) || k == 0.0)
    throw Error(ErrorKind::invalid_input, "neutrino k must be a nonzero integer (k = +-(j + 1/2))");
  if (eps != 1.0 && eps != -1.0) throw Error(ErrorKind::invalid_input, "neutrino eps must be +1 or -1");
  return InversePolyPotential(0.0, {0.0, k * (k + 1.0), 2.0 * eps * (k + 1.0), 1.0});
}

/// alpha/r + l(l+1)/r^2.
inline InversePolyPotential coulomb_potential(double alpha, int ell = 0) {
  if (ell < 0) throw Error(ErrorKind::invalid_input, "coulomb ell must be >= 0");
  if (ell == 0) return InversePolyPotential(0.0, {alpha});
  return InversePolyPotential(0.0, {alpha, double(ell) * (ell + 1)});
}

/// Named preset lookup. Missing parameters default to zero (ell = 0).
inline InversePolyPotential preset(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  auto require = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end())
      throw Error(ErrorKind::invalid_input, "preset '" + name + "' requires parameter '" + key + "'");
    return it->second;
  };
  if (name == "magnetic") return magnetic_potential(get("alpha", 0.0), get("A", 0.0), get("B", 0.0), get("C", 0.0));
  if (name == "neutrino") return neutrino_potential(require("k"), require("eps"));
  if (name == "coulomb") {
    const double ell = get("ell", 0.0);
    if (ell != std::round(ell) || ell < 0.0) throw Error(ErrorKind::invalid_input, "coulomb ell must be a non-negative integer");
    return coulomb_potential(require("alpha"), static_cast<int>(ell));
  }
  throw Error(ErrorKind::invalid_input, "unknown preset '" + name + "'");
}

// -------------------------------------------------------------- landscape

enum class ExtremumKind { minimum, maximum, inflection };

inline const char* to_string(ExtremumKind k) {
  switch (k) {
    case ExtremumKind::minimum: return "minimum";
    case ExtremumKind::maximum: return "maximum";
    case ExtremumKind::inflection: return "inflection";
  }
  return "?";
}

struct Extremum {
  double r;
  double value;
  ExtremumKind kind;
};

enum class LandscapeMethod { closed_form_cubic, numeric_bracketing };

struct LandscapeReport {
  std::vector<double> zeros;
  std::vector<Extremum> extrema;
  LandscapeMethod method = LandscapeMethod::closed_form_cubic;
};

namespace detail {

inline double numeric_second_derivative(const InversePolyPotential& p, double r) {
  const double h = 1e-5 * r;
  return (p(r + h) - 2.0 * p(r) + p(r - h)) / (h * h);
}

inline ExtremumKind classify(const InversePolyPotential& p, double r) {
  const double d2 = numeric_second_derivative(p, r);
  if (std::abs(d2) <= 1e-4 * p.second_derivative_scale(r)) return ExtremumKind::inflection;
  return d2 > 0.0 ? ExtremumKind::minimum : ExtremumKind::maximum;
}

/// Positive, de-duplicated roots that pass the residual test.
template <class F, class Scale>
std::vector<double> accept_roots(const std::vector<double>& cand, F f, Scale scale) {
  std::vector<double> out;
  for (double r : cand) {
    if (!(r > 0.0) || !std::isfinite(r)) continue;
    if (std::abs(f(r)) > 1e-8 * scale(r)) continue;
    if (!out.empty() && std::abs(r - out.back()) <= 1e-7 * r) continue;
    out.push_back(r);
  }
  return out;
}

template <class F>
std::vector<double> bracket_roots(F f) {
  constexpr int kPoints = 4001;
  const double lo = std::log(1e-4), hi = std::log(1e4);
  std::vector<double> out;
  double r_prev = std::exp(lo);
  double f_prev = f(r_prev);
  if (f_prev == 0.0) out.push_back(r_prev);
  for (int i = 1; i < kPoints; ++i) {
    const double r = std::exp(lo + (hi - lo) * i / (kPoints - 1));
    const double fr = f(r);
    if (fr == 0.0) {
      out.push_back(r);
    } else if (f_prev != 0.0 && std::signbit(fr) != std::signbit(f_prev)) {
      double a = r_prev, b = r, fa = f_prev;
      while (b - a > 1e-12 * b) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if (std::signbit(fm) == std::signbit(fa)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    r_prev = r;
    f_prev = fr;
  }
  return out;
}

}  // namespace detail

inline LandscapeReport landscape(const InversePolyPotential& p) {
  LandscapeReport rep;
  auto value = [&](double r) { return p(r); };
  auto slope = [&](double r) { return p.derivative(r); };
  auto vscale = [&](double r) { return p.value_scale(r); };
  auto dscale = [&](double r) { return p.derivative_scale(r); };

  std::vector<double> zeros, crit;
  if (p.h_max() <= 4 && p.a0() == 0.0) {
    rep.method = LandscapeMethod::closed_form_cubic;
    // V r^4 and V' r^5 as polynomials in r, lowest degree first.
    const std::array<double, 4> v4 = {p.coeff(4), p.coeff(3), p.coeff(2), p.coeff(1)};
    const std::array<double, 4> d5 = {-4.0 * p.coeff(4), -3.0 * p.coeff(3), -2.0 * p.coeff(2), -p.coeff(1)};
    zeros = real_roots_upto_cubic(std::span<const double, 4>(v4));
    crit = real_roots_upto_cubic(std::span<const double, 4>(d5));
  } else {
    rep.method = LandscapeMethod::numeric_bracketing;
    zeros = detail::bracket_roots(value);
    crit = detail::bracket_roots(slope);
  }
  rep.zeros = detail::accept_roots(zeros, value, vscale);
  for (double r : detail::accept_roots(crit, slope, dscale)) rep.extrema.push_back({r, p(r), detail::classify(p, r)});
  return rep;
}

// -------------------------------------------------------------- expansion

/// Effective Coulomb-plus-centrifugal coefficients: V_eff = q/r^2 - w/r + z_pot.
struct ExpansionTriple {
  double q = 0.0;
  double w = 0.0;
  double z_pot = 0.0;
  double r0 = 1.0;

  double effective_potential(double r) const { return q / (r * r) - w / r + z_pot; }
};

/// Expands the A_{-3}, A_{-4}, ... terms to second order about r0;
/// A_{-1} and A_{-2} are kept exact.
inline ExpansionTriple expansion_coeffs(const InversePolyPotential& p, double r0) {
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw Error(ErrorKind::domain, "expansion point r0 must be > 0");
  ExpansionTriple t;
  t.r0 = r0;
  double sq = 0.0, sw = 0.0, sz = 0.0;
  for (int h = 1; h <= p.h_max() - 2; ++h) {
    const double a = p.coeff(h + 2);
    const double rh = std::pow(r0, h);
    sq += (h + 2.0) * (h + 1.0) * a / rh;
    sw += h * (h + 2.0) * a / (rh * r0);
    sz += h * (h + 1.0) * a / (rh * r0 * r0);
  }
  t.q = p.coeff(2) + 0.5 * sq;
  t.w = sw - p.coeff(1);
  t.z_pot = p.a0() + 0.5 * sz;
  return t;
}

/// Innermost local minimum of V, else the innermost positive zero.
inline double auto_r0(const InversePolyPotential& p) {
  const auto rep = landscape(p);
  for (const auto& e : rep.extrema)
    if (e.kind == ExtremumKind::minimum) return e.r;
  if (!rep.zeros.empty()) return rep.zeros.front();
  throw Error(ErrorKind::no_structure, "auto_r0: potential has no positive minimum or zero; supply r0 explicitly");
}

}  // namespace nurad
