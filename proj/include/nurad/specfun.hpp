#pragma once

// Associated Laguerre polynomials of real order and adaptive Simpson
// quadrature for wavefunction normalization.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "nurad/error.hpp"

namespace nurad {

/// L_n^a(x) by upward three-term recurrence.
inline double laguerre(int n, double a, double x) {
  if (n < 0) throw Error(ErrorKind::domain, "Laguerre degree must be >= 0");
  if (!(a > -1.0)) throw Error(ErrorKind::domain, "Laguerre order must be > -1");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + a - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Relative deviation between the Rodrigues form
///   (1/n!) r^{-a} e^{c r} d^n/dr^n [ r^{n+a} e^{-c r} ]
/// evaluated by central finite differences at r = x, and L_n^a(c x).
/// Test oracle for small n (<= 5).
inline double rodrigues_check(int n, double a, double x, double c = 1.0) {
  if (n < 0 || n > 5) throw Error(ErrorKind::domain, "rodrigues_check supports 0 <= n <= 5");
  if (n == 0) return 0.0;
  auto weighted = [&](double r) { return std::pow(r, n + a) * std::exp(-c * r); };
  auto nth_difference = [&](double h) {
    // sum_j (-1)^j C(n, j) f(x + (n/2 - j) h) / h^n
    double acc = 0.0, binom = 1.0;
    for (int j = 0; j <= n; ++j) {
      acc += ((j % 2) ? -binom : binom) * weighted(x + (0.5 * n - j) * h);
      binom = binom * (n - j) / (j + 1.0);
    }
    return acc / std::pow(h, n);
  };
  const double eps = std::numeric_limits<double>::epsilon();
  const double h = std::min(std::pow(eps, 1.0 / (n + 4)) * std::max(1.0, x), 0.5 * x / (0.5 * n + 1.0));
  // h^2 Richardson step on top of the central differences.
  const double deriv = (4.0 * nth_difference(0.5 * h) - nth_difference(h)) / 3.0;
  double factorial = 1.0;
  for (int j = 2; j <= n; ++j) factorial *= j;
  const double rod = deriv * std::pow(x, -a) * std::exp(c * x) / factorial;
  const double ref = laguerre(n, a, c * x);
  return std::abs(rod - ref) / std::max(std::abs(ref), 1e-300);
}

namespace detail {

struct SimpsonState {
  const std::function<double(double)>& f;
  int max_depth;
};

inline double adaptive_simpson(const SimpsonState& st, double a, double b, double fa, double fm, double fb,
                               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = st.f(lm), frm = st.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= st.max_depth) throw Error(ErrorKind::integration, "adaptive Simpson did not converge in 30 levels");
  return adaptive_simpson(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adaptive_simpson(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive composite Simpson on [lo, hi] to absolute tolerance tol.
/// The range is first cut into `panels` equal pieces so that sparse initial
/// sampling cannot miss features of oscillatory integrands.
inline double integrate(const std::function<double(double)>& f, double lo, double hi, double tol, int panels = 16) {
  if (!(lo >= 0.0) || !(hi > lo)) throw Error(ErrorKind::domain, "integrate requires 0 <= lo < hi");
  if (!(tol > 0.0)) throw Error(ErrorKind::domain, "integrate requires tol > 0");
  const detail::SimpsonState st{f, 30};
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = lo + i * width;
    const double b = (i + 1 == panels) ? hi : a + width;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    total += detail::adaptive_simpson(st, a, b, fa, fm, fb, whole, tol / panels, 0);
  }
  if (!std::isfinite(total)) throw Error(ErrorKind::integration, "integrand produced a non-finite value");
  return total;
}

struct SemiInfiniteIntegral {
  double value;
  double cutoff;  ///< upper limit actually used
};

/// Integral over [0, inf) of a non-negative integrand that decays
/// exponentially. The range is truncated where f falls below 1e-16 of its
/// sampled peak; `length_scale` is a hint for the initial search step.
inline SemiInfiniteIntegral integrate_to_infinity(const std::function<double(double)>& f, double length_scale,
                                                  double rel_tol = 1e-12) {
  if (!(length_scale > 0.0)) throw Error(ErrorKind::domain, "length scale must be > 0");
  // Walk outward until the integrand has peaked and then collapsed.
  const double step = length_scale / 64.0;
  double peak = 0.0;
  double r = step;
  double cutoff = 0.0;
  int below = 0;
  for (int i = 0; i < 1000000; ++i, r += step) {
    const double v = std::abs(f(r));
    peak = std::max(peak, v);
    if (peak > 0.0 && v < 1e-16 * peak) {
      if (++below >= 64) {
        cutoff = r;
        break;
      }
    } else {
      below = 0;
    }
  }
  if (cutoff == 0.0) throw Error(ErrorKind::integration, "integrand did not decay");
  const int panels = std::clamp(static_cast<int>(cutoff / length_scale), 16, 4096);
  const double value = integrate(f, 0.0, cutoff, rel_tol * peak * length_scale, panels);
  return {value, cutoff};
}

}  // namespace nurad
