#pragma once

// Closed-form bound states of -U'' + V U = lambda^2 U for inverse-polynomial
// V after expansion about r0:
//   lambda^2 = z_pot - w^2 / [(2n+1) + 2 sign sqrt(q + 1/4)]^2
//   U(r)     = N r^{1/2 + sqrt(q+1/4)} e^{-sqrt(z) r} L_n^{2 sqrt(q+1/4)}(2 sqrt(z) r)

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "nurad/error.hpp"
#include "nurad/nu_engine.hpp"
#include "nurad/potential.hpp"
#include "nurad/specfun.hpp"

namespace nurad {

enum class StateStatus {
  bound,             ///< z > 0, w > 0, power > 1/2: normalizable
  non_normalizable,  ///< formula evaluates but the state is not a bound state
  singular,          ///< eigenvalue denominator vanishes; lambda2 is NaN
};

inline const char* to_string(StateStatus s) {
  switch (s) {
    case StateStatus::bound: return "bound";
    case StateStatus::non_normalizable: return "non-normalizable";
    case StateStatus::singular: return "singular";
  }
  return "?";
}

struct EigenState {
  int n = 0;
  int branch_sign = +1;
  double lambda2 = 0.0;
  double q = 0.0;
  double w = 0.0;
  double z = 0.0;
  double z_pot = 0.0;
  double r0 = 1.0;
  double power = 0.0;           ///< r-exponent of U
  double rate = 0.0;            ///< sqrt(z)
  double laguerre_order = 0.0;  ///< Laguerre upper index
  double norm = 0.0;            ///< N_n; zero unless bound
  double scaled_norm = 0.0;     ///< normalization of the x = 2 sqrt(z) r form
  double cutoff = 0.0;          ///< upper limit (in r) of the normalization integral
  StateStatus status = StateStatus::non_normalizable;

  bool normalizable() const { return status == StateStatus::bound; }
};

namespace detail {

inline double sqrt_index(double q) {
  if (!(q + 0.25 >= 0.0))
    throw Error(ErrorKind::complex_index, "q + 1/4 < 0: supercritical 1/r^2 attraction has no real NU index");
  return std::sqrt(q + 0.25);
}

inline double denominator(double q, int n, int sign) { return (2.0 * n + 1.0) + 2.0 * sign * sqrt_index(q); }

inline bool denominator_vanishes(double d, int n) { return std::abs(d) <= 1e-14 * (2.0 * n + 1.0); }

}  // namespace detail

/// lambda^2 from an expansion triple.
inline double eigenvalue(const ExpansionTriple& t, int n, int branch_sign) {
  if (n < 0) throw Error(ErrorKind::domain, "quantum number n must be >= 0");
  if (branch_sign != 1 && branch_sign != -1) throw Error(ErrorKind::invalid_input, "branch sign must be +1 or -1");
  const double d = detail::denominator(t.q, n, branch_sign);
  if (detail::denominator_vanishes(d, n)) throw Error(ErrorKind::singular_branch, "eigenvalue denominator vanishes");
  return t.z_pot - t.w * t.w / (d * d);
}

inline double eigenvalue(const InversePolyPotential& p, double r0, int n, int branch_sign) {
  return eigenvalue(expansion_coeffs(p, r0), n, branch_sign);
}

/// Solves the generic NU quantization condition lambda~ = lambda~_n for the
/// radial family by root finding in sqrt(z), selecting the lower k for the
/// plus branch and the higher k for the minus branch. Independent of the
/// closed-form rearrangement used by eigenvalue().
inline double eigenvalue_via_engine(const ExpansionTriple& t, int n, int branch_sign) {
  detail::sqrt_index(t.q);
  auto residual = [&](double root_z) {
    const NUProblem prob = NUProblem::radial(t.q, t.w, root_z * root_z);
    const auto ks = k_candidates(prob);
    const double k = branch_sign > 0 ? ks.front() : ks.back();
    for (const auto& b : branches(prob, k))
      if (b.physical) return quantize(prob, b, n).residual();
    throw Error(ErrorKind::no_branch, "no physical branch");
  };
  double lo = 1.0, hi = 1.0;
  double f = residual(1.0);
  const bool root_below = f < 0.0;
  for (int i = 0; i < 2000; ++i) {
    if (root_below) {
      lo *= 0.5;
      if (residual(lo) > 0.0) break;
      hi = lo;
    } else {
      hi *= 2.0;
      if (residual(hi) < 0.0) break;
      lo = hi;
    }
    if (i == 1999 || lo == 0.0 || !std::isfinite(hi))
      throw Error(ErrorKind::singular_branch, "quantization condition has no positive root");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-17 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  const double root_z = 0.5 * (lo + hi);
  return t.z_pot - root_z * root_z;
}

namespace detail {

inline double scaled_radial(const EigenState& s, double x) {
  if (x <= 0.0) return 0.0;
  return std::pow(x, s.power) * std::exp(-0.5 * x) * laguerre(s.n, s.laguerre_order, x);
}

inline void normalize(EigenState& s) {
  // In x = 2 sqrt(z) r, U(r) = scaled_norm * x^p e^{-x/2} L(x) and
  // int U^2 dr = scaled_norm^2 / (2 sqrt(z)) * int (x^p e^{-x/2} L)^2 dx.
  const double scale = 2.0 * s.power + 4.0 * s.n + 2.0;
  const auto res = integrate_to_infinity(
      [&](double x) {
        const double u = scaled_radial(s, x);
        return u * u;
      },
      scale, 1e-13);
  const double two_rate = 2.0 * s.rate;
  s.scaled_norm = std::sqrt(two_rate / res.value);
  s.norm = s.scaled_norm * std::pow(two_rate, s.power);
  s.cutoff = res.cutoff / two_rate;
}

}  // namespace detail

/// Fully populated state; bound states are normalized. Singular states carry
/// NaN eigenvalues rather than throwing so batch drivers can report them.
inline EigenState make_state(const ExpansionTriple& t, int n, int branch_sign) {
  if (n < 0) throw Error(ErrorKind::domain, "quantum number n must be >= 0");
  if (branch_sign != 1 && branch_sign != -1) throw Error(ErrorKind::invalid_input, "branch sign must be +1 or -1");
  EigenState s;
  s.n = n;
  s.branch_sign = branch_sign;
  s.q = t.q;
  s.w = t.w;
  s.z_pot = t.z_pot;
  s.r0 = t.r0;
  const double root_q = detail::sqrt_index(t.q);
  // The NU branch with negative tau' gives phi = s^{-1/2 + sign sqrt(q+1/4)} e^{-sqrt(z) s}
  // and rho = s^{2 sign sqrt(q+1/4)} e^{-2 sqrt(z) s}; U = r R adds one power.
  s.power = 0.5 + branch_sign * root_q;
  s.laguerre_order = 2.0 * branch_sign * root_q;

  const double d = detail::denominator(t.q, n, branch_sign);
  if (detail::denominator_vanishes(d, n)) {
    s.lambda2 = s.z = s.rate = std::numeric_limits<double>::quiet_NaN();
    s.status = StateStatus::singular;
    return s;
  }
  s.z = t.w * t.w / (d * d);
  s.lambda2 = t.z_pot - s.z;
  s.rate = std::sqrt(s.z);
  const bool bound = s.z > 0.0 && t.w > 0.0 && d > 0.0 && s.power > 0.5 && s.laguerre_order > -1.0;
  s.status = bound ? StateStatus::bound : StateStatus::non_normalizable;
  if (bound) detail::normalize(s);
  return s;
}

inline EigenState make_state(const InversePolyPotential& p, double r0, int n, int branch_sign) {
  return make_state(expansion_coeffs(p, r0), n, branch_sign);
}

/// Normalized U(r) of a bound state.
class Eigenfunction {
 public:
  explicit Eigenfunction(EigenState state) : s_(std::move(state)) {
    if (!s_.normalizable())
      throw Error(ErrorKind::non_normalizable, "eigenfunction requested for a state that is not bound");
  }

  double operator()(double r) const {
    if (r <= 0.0) return 0.0;
    return s_.scaled_norm * detail::scaled_radial(s_, 2.0 * s_.rate * r);
  }

  const EigenState& state() const { return s_; }

 private:
  EigenState s_;
};

inline Eigenfunction eigenfunction(const EigenState& state) { return Eigenfunction(state); }

/// Sign changes of U on a log grid spanning the region where |U| exceeds
/// 1e-12 of its maximum.
inline int node_count(const EigenState& state, int samples = 2000) {
  const Eigenfunction u(state);
  const double top = state.cutoff > 0.0 ? state.cutoff : 100.0 / state.rate;
  const double bottom = top * 1e-12;
  constexpr int kScan = 20000;
  std::vector<double> rs(kScan), vs(kScan);
  double vmax = 0.0;
  for (int i = 0; i < kScan; ++i) {
    rs[i] = bottom * std::pow(top / bottom, double(i) / (kScan - 1));
    vs[i] = u(rs[i]);
    vmax = std::max(vmax, std::abs(vs[i]));
  }
  int first = 0, last = kScan - 1;
  while (first < kScan && std::abs(vs[first]) <= 1e-12 * vmax) ++first;
  while (last > first && std::abs(vs[last]) <= 1e-12 * vmax) --last;
  if (first >= last) return 0;
  const double lo = rs[first], hi = rs[last];
  int count = 0;
  double prev = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double v = u(lo * std::pow(hi / lo, double(i) / (samples - 1)));
    if (v == 0.0) continue;
    if (prev != 0.0 && std::signbit(v) != std::signbit(prev)) ++count;
    prev = v;
  }
  return count;
}

enum class BranchPolicy { plus, minus, both };

/// Batch driver: states n = 0..n_max for the requested branch signs, sorted
/// by lambda^2 (singular states last). r0 = nullopt selects auto_r0.
inline std::vector<EigenState> solve_spectrum(const InversePolyPotential& p, std::optional<double> r0, int n_max,
                                              BranchPolicy policy = BranchPolicy::plus) {
  if (n_max < 0) throw Error(ErrorKind::domain, "n_max must be >= 0");
  const double point = r0 ? *r0 : auto_r0(p);
  const ExpansionTriple t = expansion_coeffs(p, point);
  std::vector<int> signs;
  if (policy != BranchPolicy::minus) signs.push_back(+1);
  if (policy != BranchPolicy::plus) signs.push_back(-1);
  std::vector<EigenState> out;
  for (int n = 0; n <= n_max; ++n)
    for (int sign : signs) out.push_back(make_state(t, n, sign));
  std::stable_sort(out.begin(), out.end(), [](const EigenState& a, const EigenState& b) {
    const bool an = std::isnan(a.lambda2), bn = std::isnan(b.lambda2);
    if (an != bn) return bn;
    if (!an && a.lambda2 != b.lambda2) return a.lambda2 < b.lambda2;
    if (a.n != b.n) return a.n < b.n;
    return a.branch_sign > b.branch_sign;
  });
  return out;
}

}  // namespace nurad
