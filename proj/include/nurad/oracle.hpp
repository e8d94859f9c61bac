#pragma once

// Independent finite-difference eigensolver for -U'' + V U = lambda^2 U with
// Dirichlet ends. Three-point stencil, Sturm-sequence bisection on the
// symmetric tridiagonal matrix, Richardson extrapolation over grid doublings.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "nurad/error.hpp"
#include "nurad/potential.hpp"
#include "nurad/spectrum.hpp"

namespace nurad {

struct RadialGrid {
  double r_min = 0.0;  ///< Dirichlet wall; V is never sampled there
  double r_max = 1.0;
  int m = 100;  ///< interior points

  RadialGrid() = default;
  RadialGrid(double lo, double hi, int points) : r_min(lo), r_max(hi), m(points) {
    if (!(lo >= 0.0) || !(hi > lo)) throw Error(ErrorKind::oracle, "grid needs 0 <= r_min < r_max");
    if (points < 100) throw Error(ErrorKind::oracle, "grid needs at least 100 interior points");
  }

  double h() const { return (r_max - r_min) / (m + 1); }
  double r(int i) const { return r_min + (i + 1) * h(); }  ///< i-th interior point, 0-based
};

/// Symmetric tridiagonal matrix with constant off-diagonal.
struct ConstOffTridiagonal {
  std::vector<double> diag;
  double off = 0.0;
};

/// Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
inline int sturm_count(std::span<const double> diag, std::span<const double> off, double x) {
  int count = 0;
  double pivot = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    pivot = diag[i] - x - (i == 0 ? 0.0 : e2 / pivot);
    if (pivot == 0.0) pivot = -std::numeric_limits<double>::min();
    if (pivot < 0.0) ++count;
  }
  return count;
}

inline int sturm_count(const ConstOffTridiagonal& t, double x) {
  const double e2 = t.off * t.off;
  int count = 0;
  double pivot = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    pivot = t.diag[i] - x - (i == 0 ? 0.0 : e2 / pivot);
    if (pivot == 0.0) pivot = -std::numeric_limits<double>::min();
    if (pivot < 0.0) ++count;
  }
  return count;
}

/// The j smallest eigenvalues by bisection on the Sturm count.
template <class Matrix>
std::vector<double> lowest_eigenvalues(const Matrix& t, double lo, double hi, int j, auto count) {
  std::vector<double> out;
  double floor = lo;
  for (int k = 0; k < j; ++k) {
    double a = floor, b = hi;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      if (b - a <= 1e-15 * std::max(std::abs(a), std::abs(b))) break;
      if (count(t, mid) > k) b = mid;
      else a = mid;
    }
    out.push_back(0.5 * (a + b));
    floor = a;
  }
  return out;
}

struct OracleResult {
  std::vector<double> eigenvalues;  ///< ascending
  RadialGrid grid;
  bool converged = false;
  std::vector<double> error_estimate;  ///< |extrapolated - finest grid| per eigenvalue
};

/// FD discretization on `grid`, lowest j eigenvalues.
inline OracleResult solve_fd(const std::function<double(double)>& V, const RadialGrid& grid, int j) {
  if (j < 1 || j > grid.m / 4) throw Error(ErrorKind::oracle, "requested eigenvalue count out of range");
  const double h = grid.h();
  const double inv_h2 = 1.0 / (h * h);
  ConstOffTridiagonal t;
  t.off = -inv_h2;
  t.diag.resize(grid.m);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < grid.m; ++i) {
    const double v = V(grid.r(i));
    if (!std::isfinite(v)) throw Error(ErrorKind::oracle, "potential is not finite on the grid");
    t.diag[i] = 2.0 * inv_h2 + v;
    lo = std::min(lo, t.diag[i]);
    hi = std::max(hi, t.diag[i]);
  }
  // Gershgorin
  lo -= 2.0 * inv_h2;
  hi += 2.0 * inv_h2;
  OracleResult res;
  res.grid = grid;
  res.eigenvalues = lowest_eigenvalues(t, lo, hi, j, [](const ConstOffTridiagonal& m, double x) {
    return sturm_count(m, x);
  });
  res.error_estimate.assign(j, 0.0);
  return res;
}

/// Eigenvector of the FD matrix for a converged eigenvalue (inverse iteration).
inline std::vector<double> fd_eigenvector(const std::function<double(double)>& V, const RadialGrid& grid,
                                          double eigenvalue) {
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  const int m = grid.m;
  std::vector<double> d(m);
  for (int i = 0; i < m; ++i) d[i] = 2.0 * inv_h2 + V(grid.r(i)) - eigenvalue;
  const double shift = 1e-10 * std::max(1.0, std::abs(eigenvalue));
  for (auto& x : d) x -= shift;
  const double e = -inv_h2;
  std::vector<double> u(m, 1.0), c(m), y(m);
  for (int iter = 0; iter < 3; ++iter) {
    // Thomas algorithm for (T - mu) y = u.
    double denom = d[0];
    c[0] = e / denom;
    y[0] = u[0] / denom;
    for (int i = 1; i < m; ++i) {
      denom = d[i] - e * c[i - 1];
      if (denom == 0.0) denom = std::numeric_limits<double>::min();
      c[i] = e / denom;
      y[i] = (u[i] - e * y[i - 1]) / denom;
    }
    for (int i = m - 2; i >= 0; --i) y[i] -= c[i] * y[i + 1];
    double norm = 0.0;
    for (double v : y) norm = std::max(norm, std::abs(v));
    for (int i = 0; i < m; ++i) u[i] = y[i] / norm;
  }
  return u;
}

struct OracleOptions {
  double length_scale = 1.0;  ///< sets the near-origin cutoffs and the default r_max
  double r_max_initial = 0.0; ///< 0 selects 20 * length_scale
  int m_start = 2000;
  int max_doublings = 6;
};

namespace detail {

struct Domain {
  double r_max;
  bool contained;  ///< tail of the j-th eigenvector fell below 1e-10 of its peak
};

inline Domain choose_r_max(const std::function<double(double)>& V, double r_min, double r_max, int j) {
  constexpr int kProbeM = 4000;
  for (int grow = 0; grow < 20; ++grow) {
    const RadialGrid g(r_min, r_max, kProbeM);
    const auto ev = solve_fd(V, g, j).eigenvalues.back();
    const auto u = fd_eigenvector(V, g, ev);
    double peak = 0.0, tail = 0.0;
    for (int i = 0; i < kProbeM; ++i) {
      peak = std::max(peak, std::abs(u[i]));
      if (i >= kProbeM * 9 / 10) tail = std::max(tail, std::abs(u[i]));
    }
    if (tail < 1e-10 * peak) return {r_max, true};
    r_max *= 1.5;
  }
  return {r_max / 1.5, false};
}

struct Ladder {
  std::vector<double> extrapolated;
  std::vector<double> error;
  RadialGrid grid;
  bool converged = false;
};

/// Relative changes are measured against |lambda - v_ref| so that adding a
/// constant to V does not alter the ladder.
inline Ladder run_ladder(const std::function<double(double)>& V, double r_min, double r_max, int j, double tol,
                         double v_ref, const OracleOptions& opt) {
  Ladder out;
  int m = opt.m_start;
  OracleResult prev = solve_fd(V, RadialGrid(r_min, r_max, m), j);
  OracleResult cur = prev;
  for (int d = 0; d < opt.max_doublings; ++d) {
    m *= 2;
    prev = cur;
    cur = solve_fd(V, RadialGrid(r_min, r_max, m), j);
    const double a = prev.eigenvalues.back(), b = cur.eigenvalues.back();
    if (std::abs(b - a) < tol * std::max(std::abs(b - v_ref), 1e-12)) {
      out.converged = true;
      break;
    }
  }
  const double h1 = prev.grid.h(), h2 = cur.grid.h();
  const double w1 = h1 * h1, w2 = h2 * h2;
  for (int k = 0; k < j; ++k) {
    const double rich = (w1 * cur.eigenvalues[k] - w2 * prev.eigenvalues[k]) / (w1 - w2);
    out.extrapolated.push_back(rich);
    out.error.push_back(std::abs(rich - cur.eigenvalues[k]));
  }
  out.grid = cur.grid;
  return out;
}

}  // namespace detail

/// Grid-converged lowest j eigenvalues with automatic domain selection.
/// The Dirichlet wall sits at r = 0 and V is only sampled at interior points.
/// Near-origin sensitivity is probed by clamping V below r_cut = 1e-4 and
/// 5e-5 (times length_scale); converged requires both ladders to settle and
/// the two cutoffs to agree within tol, and the box to contain the j-th state.
inline OracleResult converge(const std::function<double(double)>& V, int j, double tol,
                             const OracleOptions& opt = {}) {
  if (!(tol > 0.0)) throw Error(ErrorKind::oracle, "oracle tolerance must be > 0");
  if (j < 1) throw Error(ErrorKind::oracle, "need at least one eigenvalue");
  const double cut_a = 1e-4 * opt.length_scale;
  const double cut_b = 5e-5 * opt.length_scale;
  auto clamped = [&V](double cut) {
    return std::function<double(double)>([&V, cut](double r) { return V(std::max(r, cut)); });
  };
  const auto V_a = clamped(cut_a);
  const auto V_b = clamped(cut_b);

  const double r_max0 = opt.r_max_initial > 0.0 ? opt.r_max_initial : 20.0 * opt.length_scale;
  const auto domain = detail::choose_r_max(V_b, 0.0, r_max0, j);
  const double r_max = domain.r_max;

  const double v_ref = V_b(r_max);
  const auto b = detail::run_ladder(V_b, 0.0, r_max, j, tol, v_ref, opt);
  // When the finest grid never samples below cut_a the two clamps coincide.
  const double finest_h = r_max / (double(opt.m_start) * std::pow(2.0, opt.max_doublings) + 1.0);
  const auto a = finest_h > cut_a ? b : detail::run_ladder(V_a, 0.0, r_max, j, tol, v_ref, opt);

  OracleResult res;
  res.eigenvalues = b.extrapolated;
  res.grid = b.grid;
  res.converged = a.converged && b.converged && domain.contained;
  for (int k = 0; k < j; ++k) {
    const double cutoff_gap = std::abs(a.extrapolated[k] - b.extrapolated[k]);
    if (cutoff_gap > tol * std::max(std::abs(b.extrapolated[k] - v_ref), 1e-12)) res.converged = false;
    res.error_estimate.push_back(std::max(b.error[k], cutoff_gap));
  }
  return res;
}

// -------------------------------------------------------------- validation

enum class Agreement { pass, fail, skipped };

inline const char* to_string(Agreement a) {
  switch (a) {
    case Agreement::pass: return "pass";
    case Agreement::fail: return "fail";
    case Agreement::skipped: return "skipped";
  }
  return "?";
}

struct GapRow {
  int n = 0;
  int branch_sign = +1;
  double lambda2_nu = 0.0;
  double lambda2_eff_oracle = std::numeric_limits<double>::quiet_NaN();
  Agreement eff_agreement = Agreement::skipped;
  double lambda2_true_oracle = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
};

struct GapReport {
  std::vector<GapRow> rows;

  bool all_pass() const {
    return std::none_of(rows.begin(), rows.end(), [](const GapRow& r) { return r.eff_agreement == Agreement::fail; });
  }
};

/// Tolerance for the closed form vs oracle-on-V_eff equality test, relative
/// to max(|lambda^2|, z).
inline double eff_tolerance(double oracle_tol) { return std::max(1e-5, 10.0 * oracle_tol); }

/// (i) exactness check against the oracle on V_eff; (ii) approximation gap
/// against the oracle on the true potential. Non-bound states are skipped.
inline GapReport validate(const InversePolyPotential& p, const std::vector<EigenState>& states,
                          double oracle_tol = 1e-6) {
  GapReport rep;
  int j = 0;
  std::optional<ExpansionTriple> triple;
  double extent = 0.0;
  for (const auto& s : states) {
    if (!s.normalizable()) continue;
    j = std::max(j, s.n + 1);
    if (!triple) triple = ExpansionTriple{s.q, s.w, s.z_pot, s.r0};
    extent = std::max(extent, (s.power + 2.0 * s.n + 1.0) / s.rate);
  }

  OracleResult eff, truth;
  if (j > 0) {
    OracleOptions opt;
    opt.length_scale = triple->r0;
    opt.r_max_initial = 4.0 * extent;
    const ExpansionTriple t = *triple;
    eff = converge([t](double r) { return t.effective_potential(r); }, j, oracle_tol, opt);
    truth = converge([&p](double r) { return p(r); }, j, oracle_tol, opt);
  }

  for (const auto& s : states) {
    GapRow row;
    row.n = s.n;
    row.branch_sign = s.branch_sign;
    row.lambda2_nu = s.lambda2;
    if (s.normalizable()) {
      const double eff_val = eff.eigenvalues[s.n];
      row.lambda2_eff_oracle = eff_val;
      const double scale = std::max(std::abs(s.lambda2), s.z);
      const double allowed = eff_tolerance(oracle_tol) * scale;
      row.eff_agreement = std::abs(eff_val - s.lambda2) <= allowed ? Agreement::pass : Agreement::fail;
      row.lambda2_true_oracle = truth.eigenvalues[s.n];
      row.gap = std::abs(s.lambda2 - truth.eigenvalues[s.n]);
      row.converged = eff.converged && truth.converged;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace nurad
