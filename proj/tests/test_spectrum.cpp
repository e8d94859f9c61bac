#include <gtest/gtest.h>

#include <random>

#include "nurad/spectrum.hpp"

using namespace nurad;

namespace {

double hydrogen(double alpha, int n, int ell) {
  const double d = 2.0 * (n + ell + 1);
  return -alpha * alpha / (d * d);
}

// U, U'' of a bound state from Laguerre derivative identities
// d/dx L_n^a = -L_{n-1}^{a+1}, d2/dx2 L_n^a = L_{n-2}^{a+2}.
struct Derivs {
  double u, u2;
};

Derivs analytic(const EigenState& s, double r) {
  const double c = 2 * s.rate, x = c * r, p = s.power, a = s.laguerre_order;
  const double L = laguerre(s.n, a, x);
  const double L1 = s.n >= 1 ? -laguerre(s.n - 1, a + 1, x) : 0.0;
  const double L2 = s.n >= 2 ? laguerre(s.n - 2, a + 2, x) : 0.0;
  const double base = s.scaled_norm * std::pow(x, p) * std::exp(-0.5 * x);
  const double g = p / x - 0.5;
  return {base * L, c * c * base * ((g * g - p / (x * x)) * L + 2 * g * L1 + L2)};
}

std::vector<EigenState> random_bound_states(int count, unsigned seed, int n_cap = 5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uq(0, 20), uw(0.05, 10), uz(0, 5);
  std::uniform_int_distribution<int> un(0, n_cap);
  std::vector<EigenState> out;
  while (static_cast<int>(out.size()) < count) {
    const ExpansionTriple t{uq(rng), uw(rng), uz(rng), 1.0};
    auto s = make_state(t, un(rng), +1);
    if (s.normalizable()) out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(Eigenvalue, HydrogenGround) {
  EXPECT_DOUBLE_EQ(eigenvalue(coulomb_potential(-1, 0), 1.0, 0, +1), -0.25);
}

TEST(Eigenvalue, HydrogenP) { EXPECT_DOUBLE_EQ(eigenvalue(coulomb_potential(-1, 1), 1.0, 0, +1), -1.0 / 16); }

TEST(Eigenvalue, ConstantShift) {
  const InversePolyPotential p(0.0, {-1.2, 0.8, 0.3, 0.05});
  for (int n = 0; n < 4; ++n)
    for (int sign : {+1, -1}) {
      const double a = eigenvalue(p, 1.3, n, sign);
      const double b = eigenvalue(p.shifted(5.0), 1.3, n, sign);
      EXPECT_NEAR(b - a, 5.0, 1e-13);
    }
}

TEST(Eigenvalue, BranchConsistency) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uq(0, 20), uw(-10, 10), uz(-5, 5);
  for (int i = 0; i < 200; ++i) {
    const ExpansionTriple t{uq(rng), uw(rng), uz(rng), 1.0};
    for (int sign : {+1, -1})
      for (int n = 0; n < 6; ++n) {
        double l2;
        try {
          l2 = eigenvalue(t, n, sign);
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::singular_branch);
          continue;
        }
        const double z = t.z_pot - l2;
        const double d = (2 * n + 1) + 2 * sign * std::sqrt(t.q + 0.25);
        EXPECT_NEAR(z, t.w * t.w / (d * d), 1e-12 * std::max(1.0, std::abs(t.z_pot) + std::abs(l2)));
      }
  }
}

TEST(Eigenvalue, Errors) {
  try {
    eigenvalue(ExpansionTriple{-0.3, 1, 0, 1}, 0, +1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::complex_index);
  }
  try {
    // q = 0, minus branch, n = 0: 1 - 1 = 0
    eigenvalue(ExpansionTriple{0, 1, 0, 1}, 0, -1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular_branch);
  }
  EXPECT_THROW(eigenvalue(ExpansionTriple{0, 1, 0, 1}, -1, +1), Error);
}

TEST(Eigenvalue, HydrogenReductionExact) {
  for (double alpha : {-0.5, -1.0, -2.0})
    for (int ell = 0; ell <= 3; ++ell)
      for (int n = 0; n <= 6; ++n) {
        const double want = hydrogen(alpha, n, ell);
        EXPECT_NEAR(eigenvalue(coulomb_potential(alpha, ell), 2.0, n, +1), want, 1e-14 * std::abs(want));
      }
}

TEST(Eigenvalue, AgreesWithGenericEngineRoute) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uq(0, 20), uw(0.01, 10), uz(-5, 5);
  std::uniform_int_distribution<int> un(0, 8);
  for (int i = 0; i < 50; ++i) {
    const ExpansionTriple t{uq(rng), uw(rng), uz(rng), 1.0};
    const int n = un(rng);
    const double closed = eigenvalue(t, n, +1);
    const double generic = eigenvalue_via_engine(t, n, +1);
    const double scale = std::max({std::abs(closed), std::abs(t.z_pot), t.z_pot - closed});
    EXPECT_NEAR(closed, generic, 1e-12 * scale) << "q=" << t.q << " w=" << t.w << " n=" << n;
  }
}

TEST(Eigenvalue, GenericRouteMinusBranch) {
  // q = 2: minus denominator 2n + 1 - 3 > 0 for n >= 2
  const ExpansionTriple t{2.0, 1.5, 0.4, 1.0};
  for (int n = 2; n < 5; ++n)
    EXPECT_NEAR(eigenvalue(t, n, -1), eigenvalue_via_engine(t, n, -1), 1e-12);
}

TEST(State, PowerAndOrderComeFromEngineBranch) {
  const ExpansionTriple t{3.0, 2.0, 0.0, 1.0};
  for (int n = 0; n < 3; ++n) {
    const auto s = make_state(t, n, +1);
    const NUProblem prob = NUProblem::radial(s.q, s.w, s.z);
    for (const auto& b : branches(prob, k_candidates(prob).front())) {
      if (!b.physical) continue;
      EXPECT_NEAR(s.power, 1.0 + phi_factor(b, prob.sigma).power, 1e-13);
      EXPECT_NEAR(-s.rate, phi_factor(b, prob.sigma).rate, 1e-13);
      EXPECT_NEAR(s.laguerre_order, rho_weight(b, prob.sigma).power, 1e-13);
    }
  }
}

TEST(State, Flags) {
  // w < 0: repulsive effective Coulomb, not bound
  EXPECT_EQ(make_state(ExpansionTriple{1, -1, 0, 1}, 0, +1).status, StateStatus::non_normalizable);
  // minus branch always has power <= 1/2
  const auto m = make_state(ExpansionTriple{2, 1, 0, 1}, 3, -1);
  EXPECT_EQ(m.status, StateStatus::non_normalizable);
  EXPECT_LE(m.power, 0.5);
  const auto sing = make_state(ExpansionTriple{0, 1, 0, 1}, 0, -1);
  EXPECT_EQ(sing.status, StateStatus::singular);
  EXPECT_TRUE(std::isnan(sing.lambda2));
  EXPECT_THROW(eigenfunction(m), Error);
  try {
    eigenfunction(sing);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_normalizable);
  }
}

TEST(Eigenfunction, HydrogenGround) {
  const auto s = make_state(coulomb_potential(-1, 0), 1.0, 0, +1);
  ASSERT_TRUE(s.normalizable());
  EXPECT_NEAR(s.rate, 0.5, 1e-15);
  EXPECT_NEAR(s.power, 1.0, 1e-15);
  EXPECT_NEAR(s.norm, 1 / std::sqrt(2.0), 1e-9);
  const auto u = eigenfunction(s);
  EXPECT_NEAR(u(2.0), std::sqrt(2.0) * std::exp(-1.0), 1e-9);
  EXPECT_EQ(u(0.0), 0.0);
  for (double r : {0.1, 1.0, 5.0}) EXPECT_NEAR(u(r), r * std::exp(-r / 2) / std::sqrt(2.0), 1e-9);
}

TEST(Eigenfunction, NormMatchesGammaFormula) {
  // int x^{a+1} e^{-x} (L_n^a)^2 dx = Gamma(n + a + 1) / n! (2n + a + 1)
  for (const auto& s : random_bound_states(20, 41)) {
    const double a = s.laguerre_order;
    const double I = std::exp(std::lgamma(s.n + a + 1) - std::lgamma(s.n + 1.0)) * (2 * s.n + a + 1);
    EXPECT_NEAR(s.scaled_norm, std::sqrt(2 * s.rate / I), 1e-9 * s.scaled_norm);
  }
}

TEST(Eigenfunction, Normalized) {
  for (const auto& s : random_bound_states(20, 43)) {
    const auto u = eigenfunction(s);
    const double norm = integrate(
        [&](double r) {
          const double v = u(r);
          return v * v;
        },
        0.0, s.cutoff, 1e-13, 256);
    EXPECT_NEAR(norm, 1.0, 1e-8);
  }
}

TEST(Eigenfunction, OdeResidual) {
  for (const auto& s : random_bound_states(20, 47)) {
    const auto u = eigenfunction(s);
    const ExpansionTriple t{s.q, s.w, s.z_pot, s.r0};
    const double top = (s.power + 2 * s.n + 10) / s.rate;
    std::vector<Derivs> d;
    double max_u2 = 0;
    for (int i = 1; i <= 100; ++i) {
      d.push_back(analytic(s, top * i / 101.0));
      max_u2 = std::max(max_u2, std::abs(d.back().u2));
    }
    for (int i = 1; i <= 100; ++i) {
      const double r = top * i / 101.0;
      EXPECT_NEAR(d[i - 1].u, u(r), 1e-12 * std::abs(s.scaled_norm) + 1e-12);
      const double res = d[i - 1].u2 + (s.lambda2 - t.effective_potential(r)) * d[i - 1].u;
      EXPECT_LE(std::abs(res), 1e-6 * max_u2) << "n=" << s.n << " r=" << r;
    }
    // finite-difference cross-check of U'' at a few points
    for (double r : {0.3 * top, 0.5 * top}) {
      const double h = 1e-4 * r;
      const double fd = (u(r + h) - 2 * u(r) + u(r - h)) / (h * h);
      EXPECT_NEAR(fd, analytic(s, r).u2, 1e-4 * max_u2);
    }
  }
}

TEST(Eigenfunction, UnscaledLaguerreArgumentFailsTheOde) {
  // Using L_n(r) instead of L_n(2 sqrt(z) r) breaks the equation for n >= 1.
  const auto s = make_state(coulomb_potential(-1, 0), 1.0, 1, +1);
  const ExpansionTriple t{s.q, s.w, s.z_pot, s.r0};
  auto bad = [&](double r) { return std::pow(r, s.power) * std::exp(-s.rate * r) * laguerre(s.n, s.laguerre_order, r); };
  const double r = 3.0, h = 1e-4;
  const double u2 = (bad(r + h) - 2 * bad(r) + bad(r - h)) / (h * h);
  EXPECT_GT(std::abs(u2 + (s.lambda2 - t.effective_potential(r)) * bad(r)), 1e-3);
}

TEST(Nodes, GroundStateHasNone) {
  for (const auto& s : random_bound_states(10, 53, 0)) EXPECT_EQ(node_count(s), 0);
}

TEST(Nodes, Hydrogen) {
  const auto p = coulomb_potential(-1, 0);
  EXPECT_EQ(node_count(make_state(p, 1.0, 1, +1)), 1);
  EXPECT_EQ(node_count(make_state(p, 1.0, 3, +1)), 3);
}

TEST(Nodes, HydrogenFirstNodeLocation) {
  // L_1^1(x) = 2 - x, x = 2 sqrt(z) r with sqrt(z) = 1/4: node at r = 4
  const auto s = make_state(coulomb_potential(-1, 0), 1.0, 1, +1);
  const auto u = eigenfunction(s);
  EXPECT_LT(u(3.99) * u(4.01), 0.0);
}

TEST(Nodes, OscillationTheorem) {
  for (const auto& s : random_bound_states(30, 59)) EXPECT_EQ(node_count(s), s.n) << "q=" << s.q << " w=" << s.w;
}

TEST(SolveSpectrum, HydrogenSeries) {
  const auto states = solve_spectrum(coulomb_potential(-1, 0), 1.0, 2, BranchPolicy::plus);
  ASSERT_EQ(states.size(), 3u);
  EXPECT_DOUBLE_EQ(states[0].lambda2, -0.25);
  EXPECT_DOUBLE_EQ(states[1].lambda2, -1.0 / 16);
  EXPECT_NEAR(states[2].lambda2, -1.0 / 36, 1e-16);
}

TEST(SolveSpectrum, NeutrinoHandValue) {
  // q = 20, w = 20, z_pot = 7: 7 - 400 / (1 + 2 * 4.5)^2 = 3
  const auto states = solve_spectrum(neutrino_potential(1, +1), 1.0, 0, BranchPolicy::plus);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_DOUBLE_EQ(states[0].q, 20.0);
  EXPECT_DOUBLE_EQ(states[0].w, 20.0);
  EXPECT_DOUBLE_EQ(states[0].z_pot, 7.0);
  EXPECT_NEAR(states[0].lambda2, 3.0, 1e-12);
}

TEST(SolveSpectrum, BothBranchesCardinality) {
  const auto states = solve_spectrum(coulomb_potential(-1, 0), 1.0, 0, BranchPolicy::both);
  EXPECT_EQ(states.size(), 2u);
  const auto mag = solve_spectrum(magnetic_potential(-1, 1, 0.1, 0.01), 1.0, 3, BranchPolicy::both);
  EXPECT_EQ(mag.size(), 8u);
  for (std::size_t i = 1; i < mag.size(); ++i)
    if (!std::isnan(mag[i].lambda2)) EXPECT_LE(mag[i - 1].lambda2, mag[i].lambda2);
}

TEST(SolveSpectrum, AutoPolicy) {
  const auto states = solve_spectrum(InversePolyPotential(0, {-1, 1, -2, 1}), std::nullopt, 0);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_GT(states[0].r0, 0.0);
  try {
    solve_spectrum(coulomb_potential(-1), std::nullopt, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_structure);
  }
}

TEST(SolveSpectrum, Deterministic) {
  const auto p = magnetic_potential(-1, 1, 0.1, 0.01);
  const auto a = solve_spectrum(p, 0.7, 5, BranchPolicy::both);
  const auto b = solve_spectrum(p, 0.7, 5, BranchPolicy::both);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].n, b[i].n);
    EXPECT_EQ(a[i].branch_sign, b[i].branch_sign);
    EXPECT_EQ(std::isnan(a[i].lambda2), std::isnan(b[i].lambda2));
    if (!std::isnan(a[i].lambda2)) EXPECT_EQ(a[i].lambda2, b[i].lambda2);
    EXPECT_EQ(a[i].norm, b[i].norm);
  }
}
