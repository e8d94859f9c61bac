#pragma once

// Generic Nikiforov-Uvarov machinery for
//   Psi'' + (tau~/sigma) Psi' + (sigma~/sigma^2) Psi = 0
// with deg sigma <= 2, deg tau~ <= 1, deg sigma~ <= 2.

#include <algorithm>
#include <cmath>
#include <vector>

#include "nurad/error.hpp"
#include "nurad/polycubic.hpp"

namespace nurad {

/// c0 + c1 s + c2 s^2.
struct LowPoly {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  static constexpr double kZero = 1e-14;

  constexpr LowPoly() = default;
  constexpr LowPoly(double a0, double a1 = 0.0, double a2 = 0.0) : c0(a0), c1(a1), c2(a2) {}

  int degree() const {
    if (std::abs(c2) > kZero) return 2;
    if (std::abs(c1) > kZero) return 1;
    return 0;
  }

  double operator()(double s) const { return (c2 * s + c1) * s + c0; }

  LowPoly derivative() const { return {c1, 2.0 * c2, 0.0}; }
  /// Constant first derivative; only meaningful for degree <= 1.
  double slope() const { return c1; }
  double second_derivative() const { return 2.0 * c2; }

  friend LowPoly operator+(const LowPoly& a, const LowPoly& b) { return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2}; }
  friend LowPoly operator-(const LowPoly& a, const LowPoly& b) { return {a.c0 - b.c0, a.c1 - b.c1, a.c2 - b.c2}; }
  friend LowPoly operator*(double k, const LowPoly& a) { return {k * a.c0, k * a.c1, k * a.c2}; }
};

/// Full product of two polynomials of degree <= 2, as {c0..c4}.
struct QuarticCoeffs {
  double c[5] = {0, 0, 0, 0, 0};
};

inline QuarticCoeffs multiply(const LowPoly& a, const LowPoly& b) {
  const double x[3] = {a.c0, a.c1, a.c2};
  const double y[3] = {b.c0, b.c1, b.c2};
  QuarticCoeffs out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.c[i + j] += x[i] * y[j];
  return out;
}

struct NUProblem {
  LowPoly sigma;
  LowPoly tau_tilde;
  LowPoly sigma_tilde;

  NUProblem() = default;
  NUProblem(LowPoly s, LowPoly tt, LowPoly st) : sigma(s), tau_tilde(tt), sigma_tilde(st) {
    if (tau_tilde.degree() > 1) throw Error(ErrorKind::invalid_input, "tau~ must have degree <= 1");
    for (double c : {s.c0, s.c1, s.c2, tt.c0, tt.c1, tt.c2, st.c0, st.c1, st.c2})
      if (!std::isfinite(c)) throw Error(ErrorKind::invalid_input, "NU problem coefficients must be finite");
  }

  /// (sigma' - tau~) / 2.
  LowPoly half_gap() const { return 0.5 * (sigma.derivative() - tau_tilde); }

  /// Radicand p(s; k) = ((sigma' - tau~)/2)^2 - sigma~ + k sigma. Degree <= 2
  /// because half_gap has degree <= 1.
  LowPoly radicand(double k) const {
    const LowPoly g = half_gap();
    const LowPoly g2{g.c0 * g.c0, 2.0 * g.c0 * g.c1, g.c1 * g.c1};
    return g2 - sigma_tilde + k * sigma;
  }

  /// The radial family: sigma = s, tau~ = 2, sigma~ = -q + w s - z s^2.
  static NUProblem radial(double q, double w, double z) { return NUProblem({0.0, 1.0, 0.0}, {2.0}, {-q, w, -z}); }
};

/// Discriminant (in s) of the radicand at k, together with its natural scale.
struct RadicandDiscriminant {
  double value;
  double scale;
};

inline RadicandDiscriminant radicand_discriminant(const NUProblem& prob, double k) {
  const LowPoly p = prob.radicand(k);
  return {p.c1 * p.c1 - 4.0 * p.c2 * p.c0, std::max({1.0, p.c1 * p.c1, std::abs(4.0 * p.c2 * p.c0)})};
}

namespace detail {

constexpr double kSquareTol = 1e-9;

/// Perfect square (alpha s + beta)^2 of a radicand with non-negative leading
/// coefficient; returns false when no real square root exists.
inline bool square_root_poly(const LowPoly& p, LowPoly& root) {
  const double tol = kSquareTol * std::max({1.0, std::abs(p.c0), std::abs(p.c1), std::abs(p.c2)});
  if (p.c2 < -tol) return false;
  if (p.c2 <= tol) {
    if (std::abs(p.c1) > tol || p.c0 < -tol) return false;
    root = {std::sqrt(std::max(0.0, p.c0)), 0.0, 0.0};
    return true;
  }
  const double alpha = std::sqrt(p.c2);
  const double beta = p.c1 / (2.0 * alpha);
  if (std::abs(beta * beta - p.c0) > tol) return false;
  root = {beta, alpha, 0.0};
  return true;
}

inline bool certified(const NUProblem& prob, double k) {
  const auto d = radicand_discriminant(prob, k);
  if (std::abs(d.value) > kSquareTol * d.scale) return false;
  LowPoly root;
  return square_root_poly(prob.radicand(k), root);
}

}  // namespace detail

/// All real k for which the radicand is a perfect square, ascending.
inline std::vector<double> k_candidates(const NUProblem& prob) {
  // radicand coefficients are P_i(k) = g_i + k sigma_i.
  const LowPoly g = prob.radicand(0.0);
  const LowPoly& s = prob.sigma;
  // disc(k) = P1^2 - 4 P2 P0 = A k^2 + B k + C
  const double A = s.c1 * s.c1 - 4.0 * s.c2 * s.c0;
  const double B = 2.0 * g.c1 * s.c1 - 4.0 * (g.c2 * s.c0 + s.c2 * g.c0);
  const double C = g.c1 * g.c1 - 4.0 * g.c2 * g.c0;
  const double scale = std::max({std::abs(A), std::abs(B), std::abs(C), 1e-300});

  std::vector<double> raw;
  if (std::abs(A) > 1e-14 * scale || std::abs(B) > 1e-14 * scale) {
    for (const auto& root : quadratic_roots(std::abs(A) > 1e-14 * scale ? A : 0.0, B, C)) {
      // A double root of disc(k) can come back with a roundoff-sized imaginary part.
      if (std::abs(root.imag()) <= 1e-7 * (1.0 + std::abs(root.real()))) raw.push_back(root.real());
    }
  } else if (std::abs(C) <= 1e-14 * std::max(1.0, std::abs(g.c0) + std::abs(g.c1) + std::abs(g.c2))) {
    // disc vanishes for every k: choose the k that zeroes the lowest
    // k-dependent radicand coefficient (for constant radicands, the constant).
    if (s.c0 != 0.0) raw.push_back(-g.c0 / s.c0);
    else if (s.c1 != 0.0) raw.push_back(-g.c1 / s.c1);
    else if (s.c2 != 0.0) raw.push_back(-g.c2 / s.c2);
    else raw.push_back(0.0);
  }

  std::vector<double> out;
  for (double k : raw) {
    // One Newton step on disc(k) = 0 removes quadratic-formula roundoff.
    const double dd = 2.0 * A * k + B;
    if (std::abs(dd) > 1e-8 * scale) {
      const double step = (A * k * k + B * k + C) / dd;
      if (std::isfinite(step)) k -= step;
    }
    if (detail::certified(prob, k)) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(1.0, std::abs(x)); }),
            out.end());
  if (out.empty()) throw Error(ErrorKind::no_branch, "no real k makes the radicand a perfect square");
  return out;
}

struct NUBranch {
  double k = 0.0;
  LowPoly pi;
  int sign = +1;  ///< pi = (sigma' - tau~)/2 + sign * root
  LowPoly root;   ///< certified square root of the radicand
  LowPoly tau;
  double lambda_tilde = 0.0;
  bool physical = false;
};

inline std::vector<NUBranch> branches(const NUProblem& prob, double k) {
  const auto d = radicand_discriminant(prob, k);
  LowPoly root;
  if (std::abs(d.value) > detail::kSquareTol * d.scale || !detail::square_root_poly(prob.radicand(k), root))
    throw Error(ErrorKind::invalid_k, "k does not make the radicand a perfect square");

  const bool zero_root = root.degree() == 0 && std::abs(root.c0) <= LowPoly::kZero;
  std::vector<NUBranch> out;
  for (int sign : {+1, -1}) {
    NUBranch b;
    b.k = k;
    b.sign = sign;
    b.root = root;
    b.pi = prob.half_gap() + double(sign) * root;
    b.tau = prob.tau_tilde + 2.0 * b.pi;
    b.lambda_tilde = k + b.pi.slope();
    b.physical = b.tau.slope() < 0.0;
    out.push_back(b);
    if (zero_root) break;
  }
  return out;
}

/// sigma-bar = sigma~ + pi^2 + pi (tau~ - sigma') + pi' sigma, as quartic coefficients.
inline QuarticCoeffs sigma_bar(const NUProblem& prob, const NUBranch& b) {
  QuarticCoeffs out = multiply(b.pi, b.pi);
  const QuarticCoeffs cross = multiply(b.pi, prob.tau_tilde - prob.sigma.derivative());
  const QuarticCoeffs tail = multiply(b.pi.derivative(), prob.sigma);
  const double st[3] = {prob.sigma_tilde.c0, prob.sigma_tilde.c1, prob.sigma_tilde.c2};
  for (int i = 0; i < 5; ++i) out.c[i] += cross.c[i] + tail.c[i] + (i < 3 ? st[i] : 0.0);
  return out;
}

inline double lambda_n(const NUProblem& prob, const NUBranch& branch, int n) {
  if (n < 0) throw Error(ErrorKind::domain, "quantum number n must be >= 0");
  return -n * branch.tau.slope() - 0.5 * n * (n - 1.0) * prob.sigma.second_derivative();
}

/// lambda~ = lambda~_n, with both sides evaluated.
struct QuantizationEquation {
  int n = 0;
  double lhs = 0.0;  ///< k + pi'
  double rhs = 0.0;  ///< -n tau' - n(n-1)/2 sigma''
  double residual() const { return lhs - rhs; }
};

inline QuantizationEquation quantize(const NUProblem& prob, const NUBranch& branch, int n) {
  return {n, branch.k + branch.pi.slope(), lambda_n(prob, branch, n)};
}

/// s^power * exp(rate * s).
struct ClosedFormFactor {
  double power = 0.0;
  double rate = 0.0;

  double operator()(double s) const { return std::pow(s, power) * std::exp(rate * s); }
};

namespace detail {

inline void require_sigma_is_s(const LowPoly& sigma) {
  if (std::abs(sigma.c0) > LowPoly::kZero || std::abs(sigma.c1 - 1.0) > LowPoly::kZero ||
      std::abs(sigma.c2) > LowPoly::kZero)
    throw Error(ErrorKind::unsupported_sigma, "closed-form factors are available only for sigma(s) = s");
}

}  // namespace detail

/// phi'/phi = pi/sigma.
inline ClosedFormFactor phi_factor(const NUBranch& branch, const LowPoly& sigma) {
  detail::require_sigma_is_s(sigma);
  return {branch.pi.c0, branch.pi.c1};
}

/// rho'/rho = (tau - sigma')/sigma.
inline ClosedFormFactor rho_weight(const NUBranch& branch, const LowPoly& sigma) {
  detail::require_sigma_is_s(sigma);
  return {branch.tau.c0 - 1.0, branch.tau.c1};
}

}  // namespace nurad
