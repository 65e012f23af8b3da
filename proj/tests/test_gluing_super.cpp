#include <catch2/catch_amalgamated.hpp>

#include "superperiod/superperiod.hpp"
#include "superperiod/testing_random.hpp"

using namespace superperiod;

namespace {
G2 mono(int N, std::initializer_list<const char*> gens, int tdeg, cx coef) {
  G2 g{gens_eta2()};
  auto one = TruncatedSeries::constant(Var::t, N, 1.0);
  G2 acc = G2::scalar(gens_eta2(), TruncatedSeries::monomial(Var::t, N, tdeg, coef));
  for (auto* name : gens) acc = acc * G2::generator(gens_eta2(), name, one);
  return acc;
}
double rel(const G2& a, const G2& b) { return grassmann_rel_dist(a, b); }

struct Setup {
  EllipticContext c1, c2;
  LaurentBasis lb1, lb2;
  Setup(cx tau1, cx tau2, int N)
      : c1(tau1), c2(tau2), lb1(c1, 0, N + 2, N + 2), lb2(c2, 0, N + 2, N + 2) {}
};
}  // namespace

TEST_CASE("super basis reproduces the printed mod t^5 coefficients") {
  test_rng rng(307);
  for (int it = 0; it < 3; ++it) {
    const int N = 4;
    Setup s(rng.tau(), rng.tau(), N);
    auto sol = solve_super_basis(s.lb1, s.lb2, N);
    REQUIRE(glue_residual(sol) < 1e-10);
    cx pu1 = s.c1.e(0), pu2 = s.c2.e(0);

    const auto& w1 = sol.omega[0];
    // omega^(1)_1: delta(z_1)[1 - t^3 eta1 eta2 wp(u_2) wp(z_1)]
    //              - delta(nu_1) (wp(u_2)/2)[t^3 eta2 kappa_1 + t^4 eta1 kappa_2]
    REQUIRE(rel(w1.lead[0], mono(N, {}, 0, 1.0)) < 1e-12);
    REQUIRE(rel(w1.fcoef[0][2], mono(N, {"eta1", "eta2"}, 3, -pu2)) < 1e-10);
    REQUIRE(rel(w1.kcoef[0][1], mono(N, {"eta2"}, 3, -pu2 / 2.0)) < 1e-10);
    REQUIRE(rel(w1.kcoef[0][2], mono(N, {"eta1"}, 4, -pu2 / 2.0)) < 1e-10);
    // omega^(1)_2: delta(z_2)(t eta1 eta2 + t^2) wp(z_2)
    //              - delta(nu_2)[t eta1 kappa_1 + t^2 eta2 kappa_2]
    REQUIRE(rel(w1.lead[1], G2{gens_eta2()}) == 0.0);
    auto b2_expect = mono(N, {"eta1", "eta2"}, 1, 1.0) + mono(N, {}, 2, 1.0);
    REQUIRE(rel(w1.fcoef[1][2], b2_expect) < 1e-10);
    REQUIRE(rel(w1.kcoef[1][1], mono(N, {"eta1"}, 1, -1.0)) < 1e-10);
    REQUIRE(rel(w1.kcoef[1][2], mono(N, {"eta2"}, 2, -1.0)) < 1e-10);

    const auto& w2 = sol.omega[1];
    // mirrored expansions for omega^(2)
    REQUIRE(rel(w2.fcoef[1][2], mono(N, {"eta1", "eta2"}, 3, -pu1)) < 1e-10);
    REQUIRE(rel(w2.kcoef[1][1], mono(N, {"eta1"}, 3, pu1 / 2.0)) < 1e-10);
    REQUIRE(rel(w2.kcoef[1][2], mono(N, {"eta2"}, 4, -pu1 / 2.0)) < 1e-10);
    REQUIRE(rel(w2.fcoef[0][2], b2_expect) < 1e-10);
    REQUIRE(rel(w2.kcoef[0][1], mono(N, {"eta2"}, 1, 1.0)) < 1e-10);
    REQUIRE(rel(w2.kcoef[0][2], mono(N, {"eta1"}, 2, -1.0)) < 1e-10);

    // parity bookkeeping: f-coefficients even and divisible by t (beyond the
    // lead), kappa-coefficients odd and divisible by t
    for (int which = 0; which < 2; ++which)
      for (int i = 0; i < 2; ++i) {
        const auto& d = sol.omega[which];
        for (std::size_t n = 2; n < d.fcoef[i].size(); ++n) {
          const auto& g = d.fcoef[i][n];
          auto par = g.parity();
          REQUIRE((par == Parity::even || par == Parity::zero));
          for (unsigned m = 0; m < g.n_terms(); ++m)
            if (g.term(m).shaped()) REQUIRE(std::abs(g.term(m).coeff(0)) < 1e-13);
        }
        for (std::size_t n = 1; n < d.kcoef[i].size(); ++n) {
          const auto& g = d.kcoef[i][n];
          auto par = g.parity();
          REQUIRE((par == Parity::odd || par == Parity::zero));
          for (unsigned m = 0; m < g.n_terms(); ++m)
            if (g.term(m).shaped()) REQUIRE(std::abs(g.term(m).coeff(0)) < 1e-13);
        }
      }
  }
}

TEST_CASE("uniqueness: alternative elimination order gives identical output") {
  const int N = 5;
  Setup s(cx(0.19, 1.33), cx(-0.23, 1.61), N);
  auto sol = solve_super_basis(s.lb1, s.lb2, N, false);
  auto alt = solve_super_basis(s.lb1, s.lb2, N, true);
  for (int which = 0; which < 2; ++which)
    for (int i = 0; i < 2; ++i) {
      for (std::size_t n = 2; n < sol.omega[which].fcoef[i].size(); ++n)
        REQUIRE(grassmann_rel_dist(sol.omega[which].fcoef[i][n], alt.omega[which].fcoef[i][n]) <
                1e-12);
      for (std::size_t n = 1; n < sol.omega[which].kcoef[i].size(); ++n)
        REQUIRE(grassmann_rel_dist(sol.omega[which].kcoef[i][n], alt.omega[which].kcoef[i][n]) <
                1e-12);
    }
}

TEST_CASE("Z2 equivariance: (t, eta1, eta2) -> (-t, -eta1, eta2) fixes the solution") {
  const int N = 5;
  Setup s(cx(0.08, 1.21), cx(0.31, 0.97), N);
  auto sol = solve_super_basis(s.lb1, s.lb2, N);
  for (int which = 0; which < 2; ++which)
    for (int i = 0; i < 2; ++i) {
      for (std::size_t n = 2; n < sol.omega[which].fcoef[i].size(); ++n) {
        const auto& g = sol.omega[which].fcoef[i][n];
        REQUIRE(grassmann_rel_dist(z2_flip(g), g) < 1e-13);
      }
      for (std::size_t n = 1; n < sol.omega[which].kcoef[i].size(); ++n) {
        // the side-1 odd frame delta(kappa nu_1) itself flips under the
        // involution (nu_1 -> -nu_1), so its coefficients are anti-invariant
        const auto& g = sol.omega[which].kcoef[i][n];
        auto expect = (i == 0) ? -g : g;
        REQUIRE(grassmann_rel_dist(z2_flip(g), expect) < 1e-13);
      }
    }
}

TEST_CASE("even reduction: eta -> 0, q = -t^2 reproduces the classical solver") {
  const int N = 8;
  const int Nq = N / 2;
  Setup s(cx(0.12, 1.18), cx(-0.31, 1.52), N);
  auto super = solve_super_basis(s.lb1, s.lb2, N);
  auto d1 = even_component_values(s.c1, Nq + 2);
  auto d2 = even_component_values(s.c2, Nq + 2);
  auto even = solve_even_basis<cx>(d1, d2, Nq);
  for (int which = 0; which < 2; ++which)
    for (int i = 0; i < 2; ++i) {
      // kappa-coefficients vanish at eta = 0
      for (std::size_t n = 1; n < super.omega[which].kcoef[i].size(); ++n)
        REQUIRE(super.omega[which].kcoef[i][n].term(0).max_abs() < 1e-12);
      for (int n = 2; n <= Nq + 2; ++n) {
        auto red = even_reduction(super.omega[which].fcoef[i][static_cast<std::size_t>(n)], Nq);
        auto ev = even.f_coeff(which, i, n);
        REQUIRE(series_rel_dist(red, ev) < 1e-11);
      }
    }
}

TEST_CASE("superperiod matrix mod t^5 and symmetry") {
  test_rng rng(311);
  for (int it = 0; it < 3; ++it) {
    const int N = 4;
    Setup s(rng.tau(), rng.tau(), N);
    auto sol = solve_super_basis(s.lb1, s.lb2, N);
    auto pm = period_matrix(sol);
    cx A1 = s.c1.A(), A2 = s.c2.A();
    cx pu1 = s.c1.e(0), pu2 = s.c2.e(0);

    // Omega_11 = tau1 - 2 pi i (t^3 eta1 eta2 (wp(u2) + 2 A2) + A2 t^4)
    auto om11_even = pm.even_part(0, 0);
    REQUIRE(std::abs(om11_even.coeff(0) - s.c1.tau()) < 1e-12);
    REQUIRE(std::abs(om11_even.coeff(4) + kTwoPiI * A2) < 1e-10 * std::abs(kTwoPiI * A2));
    for (int k : {1, 2, 3}) REQUIRE(std::abs(om11_even.coeff(k)) < 1e-12);
    auto om11_eta = pm.eta_part(0, 0);
    REQUIRE(std::abs(om11_eta.coeff(3) + kTwoPiI * (pu2 + 2.0 * A2)) <
            1e-10 * std::abs(kTwoPiI * (pu2 + 2.0 * A2)));
    for (int k : {0, 1, 2, 4}) REQUIRE(std::abs(om11_eta.coeff(k)) < 1e-10);

    auto om22_even = pm.even_part(1, 1);
    REQUIRE(std::abs(om22_even.coeff(0) - s.c2.tau()) < 1e-12);
    REQUIRE(std::abs(om22_even.coeff(4) + kTwoPiI * A1) < 1e-10 * std::abs(kTwoPiI * A1));
    auto om22_eta = pm.eta_part(1, 1);
    REQUIRE(std::abs(om22_eta.coeff(3) + kTwoPiI * (pu1 + 2.0 * A1)) <
            1e-10 * std::abs(kTwoPiI * (pu1 + 2.0 * A1)));

    // Omega_12 = 2 pi i (t eta1 eta2 + t^2) mod t^5
    auto om12_even = pm.even_part(0, 1);
    REQUIRE(std::abs(om12_even.coeff(2) - kTwoPiI) < 1e-10 * std::abs(kTwoPiI));
    for (int k : {0, 1, 3, 4}) REQUIRE(std::abs(om12_even.coeff(k)) < 1e-10);
    auto om12_eta = pm.eta_part(0, 1);
    REQUIRE(std::abs(om12_eta.coeff(1) - kTwoPiI) < 1e-10 * std::abs(kTwoPiI));
    for (int k : {0, 2, 3, 4}) REQUIRE(std::abs(om12_eta.coeff(k)) < 1e-10);

    // exact coefficient-wise symmetry
    REQUIRE(grassmann_rel_dist(pm.omega[0][1], pm.omega[1][0]) < 1e-12);

    // other eta-components vanish identically (only 1 and eta1 eta2 appear)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        REQUIRE(pm.omega[i][j].term(1).max_abs() < 1e-13);
        REQUIRE(pm.omega[i][j].term(2).max_abs() < 1e-13);
      }

    // t = 0: diag(tau1, tau2)
    REQUIRE(std::abs(pm.even_part(0, 1).coeff(0)) < 1e-13);
    REQUIRE(std::abs(pm.eta_part(0, 1).coeff(0)) < 1e-13);
  }
}

TEST_CASE("even part of the super period matrix matches the classical one") {
  const int N = 8, Nq = 4;
  Setup s(cx(0.21, 1.44), cx(-0.11, 1.13), N);
  auto sol = solve_super_basis(s.lb1, s.lb2, N);
  auto pm = period_matrix(sol);
  auto d1 = even_component_values(s.c1, Nq + 2);
  auto d2 = even_component_values(s.c2, Nq + 2);
  auto esol = solve_even_basis<cx>(d1, d2, Nq);
  auto epm = even_period_matrix<cx>(esol, s.c1.tau(), s.c2.tau(), d1, d2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto red = even_reduction(pm.omega[i][j], Nq);
      REQUIRE(series_rel_dist(red, epm.omega[i][j]) < 1e-10);
    }
}

TEST_CASE("odd sections solve the spin glue relations") {
  test_rng rng(313);
  for (int it = 0; it < 3; ++it) {
    const int N = 6;
    Setup s(rng.tau(), rng.tau(), N);
    auto odd = solve_odd_section(s.lb1, s.lb2, N, 1);
    REQUIRE(odd_section_residual(odd, s.lb1, s.lb2) < 1e-10);
    cx pb1 = s.c2.e(0);  // wp of the spin point on the second component

    // F_2 = t^3 kappa_2(x_2) mod t^7: kcoef2[2] = t^3, all else O(t^7)
    REQUIRE(std::abs(odd.kcoef[1][2].coeff(3) - cx(1.0)) < 1e-12);
    for (std::size_t n = 1; n < odd.kcoef[1].size(); ++n)
      for (int k = 0; k <= std::min(N, 6); ++k)
        if (!(n == 2 && k == 3)) REQUIRE(std::abs(odd.kcoef[1][n].coeff(k)) < 1e-12);

    // F_1 = 1/kappa_1 + t^4 (wp(beta_1)/2) kappa_1 mod t^7
    REQUIRE(std::abs(odd.kcoef[0][1].coeff(4) - pb1 / 2.0) < 1e-10 * std::abs(pb1));
    for (std::size_t n = 1; n < odd.kcoef[0].size(); ++n)
      for (int k = 0; k <= std::min(N, 6); ++k)
        if (!(n == 1 && k == 4)) REQUIRE(std::abs(odd.kcoef[0][n].coeff(k)) < 1e-12);

    // only even-index kappas in F_2
    for (std::size_t n = 1; n < odd.kcoef[1].size(); n += 2)
      REQUIRE(odd.kcoef[1][n].max_abs() < 1e-12);

    // mirrored pole component
    auto odd2 = solve_odd_section(s.lb1, s.lb2, N, 2);
    REQUIRE(odd_section_residual(odd2, s.lb1, s.lb2) < 1e-10);
    REQUIRE(std::abs(odd2.kcoef[0][2].coeff(3) + cx(1.0)) < 1e-12);
  }
}
