#pragma once

// Closed-form roots of real quadratics and cubics (Cardano), plus the
// handful of low-degree polynomial helpers the other modules lean on.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "nurad/error.hpp"

namespace nurad {

using cplx = std::complex<double>;

/// a3 r^3 + a2 r^2 + a1 r + a0 with a3 != 0.
class RealCubic {
 public:
  RealCubic(double a3, double a2, double a1, double a0) : a3_(a3), a2_(a2), a1_(a1), a0_(a0) {
    if (!std::isfinite(a3) || !std::isfinite(a2) || !std::isfinite(a1) || !std::isfinite(a0))
      throw Error(ErrorKind::invalid_input, "cubic coefficients must be finite");
    if (a3 == 0.0) throw Error(ErrorKind::invalid_input, "cubic leading coefficient is zero");
  }

  double a3() const { return a3_; }
  double a2() const { return a2_; }
  double a1() const { return a1_; }
  double a0() const { return a0_; }

  template <class T>
  T operator()(T r) const {
    return ((T(a3_) * r + T(a2_)) * r + T(a1_)) * r + T(a0_);
  }

 private:
  double a3_, a2_, a1_, a0_;
};

/// y^3 + F y + H with r = y + shift.
struct DepressedCubic {
  double F = 0.0;
  double H = 0.0;
  double shift = 0.0;

  /// Monic coefficients {c2, c1, c0} of the cubic in the original variable.
  std::array<double, 3> monic_coefficients() const {
    const double s = shift;
    // (r - s)^3 + F (r - s) + H
    return {-3.0 * s, 3.0 * s * s + F, -s * s * s - F * s + H};
  }
};

struct CubicRoot {
  cplx value;
  bool real = false;
};

struct CubicRoots {
  std::array<CubicRoot, 3> roots;

  std::vector<double> real_values() const {
    std::vector<double> out;
    for (const auto& r : roots)
      if (r.real) out.push_back(r.value.real());
    return out;
  }
};

inline DepressedCubic depress(const RealCubic& cubic) {
  const double b = cubic.a2() / cubic.a3();
  const double c = cubic.a1() / cubic.a3();
  const double d = cubic.a0() / cubic.a3();
  DepressedCubic out;
  out.shift = -b / 3.0;
  out.F = c - b * b / 3.0;
  out.H = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  return out;
}

namespace detail {

inline double imag_tolerance(double max_abs_root) { return 1e-9 * (1.0 + max_abs_root); }

inline bool root_less(const cplx& x, const cplx& y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

/// Real/complex classification with exact conjugate closure, sorted.
inline CubicRoots classify(std::array<cplx, 3> y) {
  double max_abs = 0.0;
  for (const auto& v : y) max_abs = std::max(max_abs, std::abs(v));
  const double tol = detail::imag_tolerance(max_abs);

  CubicRoots out;
  int n_real = 0;
  for (int i = 0; i < 3; ++i) {
    out.roots[i].real = std::abs(y[i].imag()) <= tol;
    if (out.roots[i].real) {
      y[i] = cplx(y[i].real(), 0.0);
      ++n_real;
    }
  }
  if (n_real == 1) {
    // The remaining pair must be exact conjugates.
    int i = -1, j = -1;
    for (int k = 0; k < 3; ++k)
      if (!out.roots[k].real) (i < 0 ? i : j) = k;
    const double re = 0.5 * (y[i].real() + y[j].real());
    const double im = 0.5 * (std::abs(y[i].imag()) + std::abs(y[j].imag()));
    y[i] = cplx(re, im);
    y[j] = cplx(re, -im);
  } else if (n_real == 2) {
    // Only possible through the tolerance; a lone complex root of a real cubic is real.
    for (int k = 0; k < 3; ++k) {
      if (!out.roots[k].real) {
        y[k] = cplx(y[k].real(), 0.0);
        out.roots[k].real = true;
      }
    }
  }
  for (int i = 0; i < 3; ++i) out.roots[i].value = y[i];
  std::sort(out.roots.begin(), out.roots.end(),
            [](const CubicRoot& x, const CubicRoot& z) { return detail::root_less(x.value, z.value); });
  return out;
}

}  // namespace detail

/// Roots of the depressed cubic, mapped back to the original variable.
inline CubicRoots cardano_roots(const DepressedCubic& d) {
  if (!std::isfinite(d.F) || !std::isfinite(d.H) || !std::isfinite(d.shift))
    throw Error(ErrorKind::invalid_input, "depressed cubic coefficients must be finite");

  const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const cplx disc = std::sqrt(cplx(d.H * d.H + 4.0 * d.F * d.F * d.F / 27.0));

  // a and b play symmetric roles; take a from the larger of H +- sqrt(...)
  // so that b = -F/(3a) does not divide by a cancelled quantity.
  const cplx plus = 0.5 * (d.H + disc);
  const cplx minus = 0.5 * (d.H - disc);
  const cplx a3 = std::abs(plus) >= std::abs(minus) ? plus : minus;
  const cplx a = std::pow(a3, 1.0 / 3.0);
  cplx b;
  if (std::abs(a) > 0.0) {
    b = -d.F / (3.0 * a);
  } else {
    b = 0.0;  // F = H = 0: triple root at the shift
  }

  std::array<cplx, 3> y = {-a - b, -a * omega * omega - b * omega, -a * omega - b * omega * omega};

  for (auto& v : y) v += d.shift;
  return detail::classify(y);
}

/// Cardano roots of a general cubic, Newton-polished against the original
/// coefficients to undo the roundoff of depression.
inline CubicRoots cardano_roots(const RealCubic& cubic) {
  std::array<cplx, 3> y;
  const auto raw = cardano_roots(depress(cubic));
  for (int i = 0; i < 3; ++i) y[i] = raw.roots[i].value;
  auto eval = [&](cplx x) { return ((cubic.a3() * x + cubic.a2()) * x + cubic.a1()) * x + cubic.a0(); };
  auto deriv = [&](cplx x) { return (3.0 * cubic.a3() * x + 2.0 * cubic.a2()) * x + cubic.a1(); };
  for (auto& x : y) {
    for (int it = 0; it < 4; ++it) {
      const cplx dp = deriv(x);
      if (dp == 0.0) break;
      const cplx next = x - eval(x) / dp;
      if (!(std::abs(eval(next)) < std::abs(eval(x)))) break;
      x = next;
    }
  }
  return detail::classify(y);
}

/// Roots of a x^2 + b x + c. Falls back to the linear root when a = 0.
inline std::vector<cplx> quadratic_roots(double a, double b, double c) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw Error(ErrorKind::invalid_input, "quadratic coefficients must be finite");
  if (a == 0.0) {
    if (b == 0.0) throw Error(ErrorKind::degenerate, "a = b = 0");
    return {cplx(-c / b, 0.0)};
  }
  std::vector<cplx> out;
  const double disc = b * b - 4.0 * a * c;
  if (disc >= 0.0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    const double x1 = q / a;
    const double x2 = q != 0.0 ? c / q : 0.0;
    out = {cplx(x1, 0.0), cplx(x2, 0.0)};
  } else {
    const double re = -b / (2.0 * a);
    const double im = std::abs(std::sqrt(-disc) / (2.0 * a));
    out = {cplx(re, -im), cplx(re, im)};
  }
  std::sort(out.begin(), out.end(), detail::root_less);
  return out;
}

/// Real roots of c[0] + c[1] x + c[2] x^2 + c[3] x^3 where the leading
/// coefficients may vanish. Near-real complex roots (|im| <= loose_imag *
/// (1 + |root|)) are admitted as candidates and then Newton-polished, which
/// recovers double roots that Cardano perturbs off the real axis.
/// An identically zero polynomial yields no roots.
inline std::vector<double> real_roots_upto_cubic(std::span<const double, 4> c, double loose_imag = 1e-6) {
  std::vector<cplx> cand;
  if (c[3] != 0.0) {
    for (const auto& r : cardano_roots(RealCubic(c[3], c[2], c[1], c[0])).roots) cand.push_back(r.value);
  } else if (c[2] != 0.0 || c[1] != 0.0) {
    cand = quadratic_roots(c[2], c[1], c[0]);
  } else {
    return {};
  }
  auto eval = [&](double x) { return ((c[3] * x + c[2]) * x + c[1]) * x + c[0]; };
  auto deriv = [&](double x) { return (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1]; };

  std::vector<double> out;
  for (const auto& z : cand) {
    if (std::abs(z.imag()) > loose_imag * (1.0 + std::abs(z))) continue;
    double x = z.real();
    for (int it = 0; it < 8; ++it) {
      const double dp = deriv(x);
      if (dp == 0.0) break;
      const double step = eval(x) / dp;
      if (!std::isfinite(step)) break;
      const double next = x - step;
      if (std::abs(eval(next)) >= std::abs(eval(x))) break;
      x = next;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nurad
