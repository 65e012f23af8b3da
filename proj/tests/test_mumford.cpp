#include <catch2/catch_amalgamated.hpp>

#include "superperiod/mumford.hpp"
#include "superperiod/testing_random.hpp"

using namespace superperiod;

namespace {
double rel(cx a, cx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30}); }

Mobius random_mobius(test_rng& rng, const std::array<cx, 6>& pts) {
  // p w - r s = 1; resample until no point sits near the pole of the map
  for (;;) {
    cx p = rng.complex_in_disk() + cx(1.5, 0.2);
    cx r = 0.4 * rng.complex_in_disk();
    cx s = 0.08 * rng.complex_in_disk();
    cx w = (1.0 + r * s) / p;
    bool ok = true;
    for (cx e : pts)
      if (std::abs(s * e + w) < 0.35) ok = false;
    if (ok) return {p, r, s, w};
  }
}
}  // namespace

TEST_CASE("glued branch points: unglued limit and leading orders") {
  test_rng rng(601);
  for (int it = 0; it < 2; ++it) {
    cx tau1 = rng.tau(1.0, 1.8), tau2 = rng.tau(1.0, 1.8);
    EllipticContext c1(tau1), c2(tau2);
    cx q(1e-3, 4e-4);
    auto g = glued_branch_points(tau1, tau2, q, true);
    for (int i = 0; i < 3; ++i) {
      REQUIRE(rel(g.a[i], -1.0 / c1.e(i)) < 1e-8);
      REQUIRE(rel(g.b[i], -q * q * c2.e(i)) < 1e-8);
    }
    // refined vs leading differ at O(q^4): ratio test with factor ~16
    auto lead = glued_branch_points(tau1, tau2, q, false);
    auto g2q = glued_branch_points(tau1, tau2, q / 2.0, true);
    auto lead2 = glued_branch_points(tau1, tau2, q / 2.0, false);
    for (int i = 0; i < 3; ++i) {
      double d1 = std::abs(g.a[i] - lead.a[i]);
      double d2 = std::abs(g2q.a[i] - lead2.a[i]);
      if (d1 > 1e-13 && d2 > 1e-14) {
        double ratio = d1 / d2;
        REQUIRE(ratio > 10.0);
        REQUIRE(ratio < 24.0);
      }
    }
    // jacobians against finite differences in tau1
    double h = 1e-6;
    auto gp = glued_branch_points(tau1 + h, tau2, q, true);
    auto gm = glued_branch_points(tau1 - h, tau2, q, true);
    for (int i = 0; i < 3; ++i) {
      cx fd = (gp.a[i] - gm.a[i]) / (2.0 * h);
      REQUIRE(rel(fd, g.jac_a[i][0]) < 1e-5);
      REQUIRE(std::abs(g.jac_a[i][1]) < 1e-10);  // a-side independent of tau2 at this order
    }
    // q-derivative
    cx hq(1e-7, 0.0);
    auto gqp = glued_branch_points(tau1, tau2, q + hq, true);
    auto gqm = glued_branch_points(tau1, tau2, q - hq, true);
    for (int i = 0; i < 3; ++i) {
      cx fd = (gqp.b[i] - gqm.b[i]) / (2.0 * hq);
      REQUIRE(rel(fd, g.jac_b[i][2]) < 1e-5);
    }
  }
}

TEST_CASE("vol contraction: antisymmetry and the genus-1 dtau coefficient") {
  test_rng rng(607);
  // swapping two points flips the sign (all jacobians swapped along)
  std::array<cx, 6> p;
  std::array<std::array<cx, 3>, 6> j;
  for (int i = 0; i < 6; ++i) {
    p[i] = rng.complex_in_disk(2.0);
    for (int k = 0; k < 3; ++k) j[i][k] = rng.complex_in_disk();
  }
  cx base = vol_contraction6(p, j);
  std::swap(p[1], p[4]);
  std::swap(j[1], j[4]);
  cx swapped = vol_contraction6(p, j);
  REQUIRE(rel(swapped, -base) < 1e-12);

  // genus-1: a(q^{1/2})/q^{1/2} has a nonzero limit
  auto a_of = [&](double qh) {
    cx tau = std::log(cx(qh * qh)) / kTwoPiI;
    EllipticContext ctx(tau);
    std::array<cx, 4> pts{cx(0.0), 1.0 / ctx.e(0), 1.0 / ctx.e(1), 1.0 / ctx.e(2)};
    std::array<cx, 4> dpt{cx(0.0), -ctx.e_tau_derivative(0) / (ctx.e(0) * ctx.e(0)),
                          -ctx.e_tau_derivative(1) / (ctx.e(1) * ctx.e(1)),
                          -ctx.e_tau_derivative(2) / (ctx.e(2) * ctx.e(2))};
    return vol_contraction4(pts, dpt);
  };
  cx r1 = a_of(1e-2) / 1e-2;
  cx r2 = a_of(1e-3) / 1e-3;
  REQUIRE(std::abs(r1) > 1e-6);
  REQUIRE(rel(r1, r2) < 0.25);  // same leading coefficient
}

TEST_CASE("genus-1 mumford F: scaling degree, symmetry, pole order") {
  test_rng rng(613);
  cx u1 = rng.complex_in_disk(2.0), u2 = rng.complex_in_disk(2.0);
  cx v1 = rng.complex_in_disk(2.0), v2 = rng.complex_in_disk(2.0);
  cx lam(1.3, -0.4);
  REQUIRE(rel(genus1_mumford_F(lam * u1, lam * u2, lam * v1, lam * v2),
              genus1_mumford_F(u1, u2, v1, v2) / std::pow(lam, 10)) < 1e-11);
  REQUIRE(rel(genus1_mumford_F(v1, v2, u1, u2), genus1_mumford_F(u1, u2, v1, v2)) < 1e-12);
  // F (v1 - v2) finite and nonzero as v2 -> v1
  cx prev = 0.0;
  for (double eps : {1e-3, 1e-5}) {
    cx val = genus1_mumford_F(u1, u2, v1, v1 + eps) * cx(-eps);
    if (scalar_norm(prev) != 0.0) REQUIRE(rel(val, prev) < 1e-2);
    prev = val;
  }
  REQUIRE(std::abs(prev) > 1e-12);
  // the quadruple identity behind the spin sum
  cx a = 0.0, b = 1.0, c = 2.0, d = 5.0;
  REQUIRE(std::abs((a - b) * (c - d) - (a - c) * (b - d) + (a - d) * (b - c)) < 1e-14);
}

TEST_CASE("genus-1 coefficients: spin sum vanishes; ramond-degeneration scaling") {
  test_rng rng(617);
  for (int it = 0; it < 10; ++it) {
    EllipticContext ctx(rng.tau(0.7, 2.2));
    cx c1 = genus1_mumford_coefficient(ctx, 1);
    cx c2 = genus1_mumford_coefficient(ctx, 2);
    cx c3 = genus1_mumford_coefficient(ctx, 3);
    double scale = std::max({std::abs(c1), std::abs(c2), std::abs(c3)});
    REQUIRE(std::abs(c1 + c2 + c3) < 1e-12 * scale);
  }
  // c_spin q^{1/2} -> nonzero limit for the spins separating e2, e3
  auto c_at = [&](double qh, int spin) {
    EllipticContext ctx(std::log(cx(qh * qh)) / kTwoPiI);
    return genus1_mumford_coefficient(ctx, spin);
  };
  for (int spin : {2, 3}) {
    cx s1 = c_at(1e-3, spin) * 1e-3;
    cx s2 = c_at(1e-4, spin) * 1e-4;
    REQUIRE(std::abs(s2) > 1e-16);
    REQUIRE(rel(s1, s2) < 0.05);
  }
  // while the non-separating spin stays bounded
  REQUIRE(std::abs(c_at(1e-4, 1)) < 1e3);
}

TEST_CASE("genus-2 densities: Q antisymmetry, partition equivariance, glued limit") {
  test_rng rng(619);
  BranchConfig cfg;
  for (int i = 0; i < 3; ++i) {
    cfg.u[i] = rng.complex_in_disk(2.0);
    cfg.v[i] = rng.complex_in_disk(2.0) + cx(3.0);
  }
  auto md = genus2_densities(cfg);
  REQUIRE(rel(witten_Q(cfg.v, cfg.u), -md.Q) < 1e-13);
  // an odd permutation inside a triple flips the difference product, and
  // the relabeled volume contraction flips along with it, so the paired
  // density is equivariant
  BranchConfig swapped = cfg;
  std::swap(swapped.u[0], swapped.u[1]);
  auto md2 = genus2_densities(swapped);
  REQUIRE(rel(md2.density1, -md.density1) < 1e-12);
  REQUIRE(rel(md2.density2, -md.density2) < 1e-12);
  {
    std::array<std::array<cx, 3>, 6> jj;
    test_rng rj(777);
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 3; ++k) jj[i][k] = rj.complex_in_disk();
    auto jswap = jj;
    std::swap(jswap[0], jswap[1]);
    cx full = vol_contraction6(cfg.all(), jj) * md.density1;
    cx full2 = vol_contraction6(swapped.all(), jswap) * md2.density1;
    REQUIRE(rel(full, full2) < 1e-11);
  }
  // coincident points are rejected with the pair reported
  BranchConfig bad = cfg;
  bad.v[2] = bad.u[0];
  REQUIRE_THROWS_AS(genus2_densities(bad), std::domain_error);

  // glued configuration: Q -> -4/g3(tau1) + O(q^2)
  cx tau1(0.21, 1.32), tau2(-0.17, 1.08);
  EllipticContext c1(tau1);
  auto q_at = [&](double qa) {
    auto g = glued_branch_points(tau1, tau2, cx(qa, 0.0), true);
    return genus2_densities(g.config()).Q;
  };
  cx fitq = (4.0 * q_at(2e-3) - q_at(4e-3)) / 3.0;
  REQUIRE(rel(fitq, -4.0 / c1.g3()) < 1e-5);
}

TEST_CASE("SL2 covariance of both densities with the trivialization weights") {
  test_rng rng(631);
  BranchConfig cfg;
  for (int i = 0; i < 3; ++i) {
    cfg.u[i] = rng.complex_in_disk(1.5);
    cfg.v[i] = rng.complex_in_disk(1.5) + cx(2.5, 0.5);
  }
  std::array<std::array<cx, 3>, 6> jac;
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 3; ++k) jac[i][k] = rng.complex_in_disk();

  auto pts = cfg.all();
  auto md = genus2_densities(cfg);
  cx contraction = vol_contraction6(pts, jac);
  cx n1 = contraction * md.density1;
  cx n2 = contraction * md.density2;

  for (int trial = 0; trial < 10; ++trial) {
    Mobius g = random_mobius(rng, pts);
    BranchConfig tcfg;
    std::array<std::array<cx, 3>, 6> tjac;
    for (int i = 0; i < 6; ++i) {
      cx x = pts[i];
      cx img = g(x);
      for (int k = 0; k < 3; ++k) tjac[i][k] = g.dfactor(x) * jac[i][k];
      if (i < 3)
        tcfg.u[i] = img;
      else
        tcfg.v[i - 3] = img;
    }
    auto tmd = genus2_densities(tcfg);
    cx tcontr = vol_contraction6(tcfg.all(), tjac);
    cx t1 = tcontr * tmd.density1;
    cx t2 = tcontr * tmd.density2;
    cx w_chi = mobius_density_weight(g, pts, true);
    cx w_nochi = mobius_density_weight(g, pts, false);
    REQUIRE(rel(t1, n1 * w_chi) < 1e-9);
    REQUIRE(rel(t2, n2 * w_nochi) < 1e-9);
  }
}

TEST_CASE("pushforward leading data and the genus-1 factorization") {
  // B formula against the assembled difference product
  test_rng rng(641);
  for (int it = 0; it < 2; ++it) {
    cx tau1 = rng.tau(1.0, 1.9), tau2 = rng.tau(1.0, 1.9);
    EllipticContext c1(tau1), c2(tau2);
    auto pf = pushforward_leading(tau1, tau2);
    auto lead_at = [&](double qa) {
      auto g = glued_branch_points(tau1, tau2, cx(qa, 0.0), true);
      cx prod = (g.a[0] - g.b[1]) * (g.a[0] - g.b[2]) * (g.b[1] - g.b[2]) * (g.a[1] - g.a[2]) *
                (g.a[1] - g.b[0]) * (g.a[2] - g.b[0]);
      cx g34 = c1.g3() / 4.0;
      return prod / (qa * qa) * (g34 * g34);
    };
    // the O(q^2) correction drops out of the Richardson fit
    cx l4 = lead_at(4e-3), l2 = lead_at(2e-3);
    cx fit = (4.0 * l2 - l4) / 3.0;
    REQUIRE(rel(fit, pf.B) < 1e-6);
    // vol-contraction of the glued family scales as q^3
    auto contr = [&](double qa) {
      auto g = glued_branch_points(tau1, tau2, cx(qa, 0.0), true);
      return vol_contraction6(g.config().all(), g.jacobians());
    };
    cx v1 = contr(2e-3), v2 = contr(1e-3);
    double ratio = std::abs(v1) / std::abs(v2);
    REQUIRE(ratio > 7.0);
    REQUIRE(ratio < 9.2);
    // and its leading coefficient is q^3 (g3/4)^{-2} A
    cx g34 = c1.g3() / 4.0;
    cx fitA = v2 / cx(1e-9) * (g34 * g34);
    REQUIRE(rel(fitA, pf.A) < 2e-2);
  }

  // [A/(BC)] / [c1(tau1) c2(tau2)] constant across tau pairs
  test_rng rng2(643);
  cx ratio0;
  for (int it = 0; it < 4; ++it) {
    cx tau1 = rng2.tau(0.9, 2.0), tau2 = rng2.tau(0.9, 2.0);
    auto pf = pushforward_leading(tau1, tau2);
    EllipticContext c1(tau1), c2(tau2);
    cx cc = genus1_mumford_coefficient(c1, 1) * genus1_mumford_coefficient(c2, 1);
    cx ratio = pf.a / cc;
    if (it == 0)
      ratio0 = ratio;
    else
      REQUIRE(rel(ratio, ratio0) < 1e-6);
  }
}

TEST_CASE("measure polar term: routes agree, scaling degree, spin sum") {
  test_rng rng(653);
  cx tau1 = rng.tau(), tau2 = rng.tau();
  cx taut1 = std::conj(rng.tau()), taut2 = std::conj(rng.tau());
  auto mp = measure_polar_term(tau1, taut1, tau2, taut2);
  REQUIRE(rel(mp.unfactored, mp.factored) < 1e-10);
  // degree -6 homogeneity in each sector gap
  cx lam(1.1, 0.3);
  auto mp2 = measure_polar_term(tau1, tau1 + lam * (taut1 - tau1), tau2, taut2);
  // c-coefficients change too, so compare only the h-part scaling by
  // reconstructing: unfactored ~ gap1^{-6}: use the factored structure
  cx gap_ratio = std::pow(lam, -6);
  cx expected = mp.factored * gap_ratio *
                (std::conj(genus1_mumford_coefficient(EllipticContext(std::conj(tau1 + lam * (taut1 - tau1))), 1)) /
                 std::conj(genus1_mumford_coefficient(EllipticContext(std::conj(taut1)), 1)));
  REQUIRE(rel(mp2.factored, expected) < 1e-9);
  // spin sum over the 3 x 3 holomorphic-sector choices (conjugate-sector
  // spins held fixed) vanishes because each leg's coefficients sum to zero
  cx acc = 0.0;
  double scale = 0.0;
  for (int s1 = 1; s1 <= 3; ++s1)
    for (int s2 = 1; s2 <= 3; ++s2) {
      auto m = measure_polar_term(tau1, taut1, tau2, taut2, s1, s2, 2, 3);
      acc += m.unfactored;
      scale = std::max(scale, std::abs(m.unfactored));
    }
  REQUIRE(std::abs(acc) < 1e-10 * scale);
  REQUIRE_THROWS_AS(measure_polar_term(tau1, tau1, tau2, taut2), std::domain_error);
}

TEST_CASE("chi basis limit: regularity, kappa proportionality, square compare") {
  test_rng rng(661);
  for (int it = 0; it < 2; ++it) {
    cx tau1 = rng.tau(1.0, 1.8), tau2 = rng.tau(1.0, 1.8);
    auto chi = chi_basis_limit(tau1, tau2, 8);
    // no negative t-powers in either component of chi_1 or t chi_2
    REQUIRE(chi.regularity_violation < 1e-10);
    // t = 0: chi_1 component 1 is proportional to kappa_1(x_1); the second
    // components carry the printed t kappa_2 / kappa_1 structure
    REQUIRE(chi.kappa_match < 1e-9);
    // the two components share one normalization: lambda ratios are +1 for
    // chi_1 and -1 for t chi_2
    REQUIRE(std::abs(chi.lambda1_comp2 / chi.lambda1_comp1 - 1.0) < 1e-9);
    REQUIRE(std::abs(chi.lambda2_comp1 / chi.lambda2_comp2 + 1.0) < 1e-9);
    // branch-independent square of the odd section matches the spin relation
    REQUIRE(chi.square_compare < 1e-8);
  }
  // the lemniscatic point tau = i sits on the singular locus g3 = 0
  REQUIRE_THROWS_AS(chi_basis_limit(cx(0.0, 1.0), cx(0.1, 1.3)), std::domain_error);
}
