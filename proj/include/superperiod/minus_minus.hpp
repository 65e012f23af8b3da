#pragma once

#include <array>
#include <vector>

#include "superperiod/superperiod.hpp"

namespace superperiod {

// ---------------------------------------------------------------------------
// (-,-) separating-node gluing: both genus-1 components carry an odd spin
// structure, the universal curves are non-split with odd moduli eta_i, and
// functions on X_i - q_i are spanned by
//   1, fh_n = wp^{(n-2)} + theta eta wpdot^{(n-2)} (normalized),
//   psi_1 = theta - eta zeta_1,  psi_2 = theta zeta_1' + eta zeta_1_dot,
//   psih_n = eta wpdot^{(n-3)} + theta wp^{(n-2)} (normalized),
// plus, for sections with poles at the order-two point u = 1/2,
//   H_u = h_u + theta eta h_u_dot  and  psi_1 h_u.
// The glue chart is the same NS-node chart as the (+,+) case.
// ---------------------------------------------------------------------------

struct MMComponentBasis {
  const EllipticContext* ctx = nullptr;
  int side = 1;  // 1 or 2: which base odd modulus eta_i multiplies theta
  int N = 0, P = 0, M = 0;
  LaurentWindow<G3> psi1, psi2, Hu, psi1hu;
  std::vector<LaurentWindow<G3>> fh;    // index n = 2..P+1
  std::vector<LaurentWindow<G3>> psih;  // index n = 3..P+1
  cx zeta1_u;                           // zeta_1(1/2)
};

inline MMComponentBasis build_mm_component(const EllipticContext& ctx, int side, int N) {
  MMComponentBasis b;
  b.ctx = &ctx;
  b.side = side;
  b.N = N;
  b.P = N + 2;
  b.M = N + 2;
  const int lo = -b.P - 2, hi = b.M + 2;
  const char* eta_name = side == 1 ? "eta1" : "eta2";
  auto theta = detail_glue::gen3("theta", N);
  auto eta = detail_glue::gen3(eta_name, N);

  // tau-derivative data via jets (single modulus: slot 1)
  cx q = ctx.q();
  cx E2 = ctx.E2(), E4 = eisenstein_E4(q, ctx.q_terms()), E6 = eisenstein_E6(q, ctx.q_terms());
  cx dE2 = kTwoPiI * (E2 * E2 - E4) / 12.0;
  cx dE4 = kTwoPiI * (E2 * E4 - E6) / 3.0;
  cx dE6 = kTwoPiI * (E2 * E6 - E4 * E4) / 2.0;
  Jet3 g2j(ctx.g2(), 4.0 * std::pow(kPi, 4) / 3.0 * dE4, 0.0);
  Jet3 g3j(ctx.g3(), 8.0 * std::pow(kPi, 6) / 27.0 * dE6, 0.0);
  const int jmax = (b.P + b.M) / 2 + 4;
  auto aj = wp_laurent_coeffs<Jet3>(g2j, g3j, jmax);
  cx eta1W_dot = -kTwoPiI * kTwoPiI / 12.0 * dE2;

  // Taylor jets of wp at u = 1/2
  const int kmax = b.P + b.M + 4;
  std::vector<Jet3> T(static_cast<std::size_t>(kmax) + 1);
  T[0] = Jet3(ctx.e(0), ctx.e_tau_derivative(0), 0.0);
  for (int k = 0; k + 2 <= kmax; ++k) {
    Jet3 conv{};
    for (int m = 0; m <= k; ++m) conv += T[static_cast<std::size_t>(m)] * T[static_cast<std::size_t>(k - m)];
    Jet3 rhs = Jet3(6.0) * conv - (k == 0 ? g2j / Jet3(2.0) : Jet3{});
    T[static_cast<std::size_t>(k + 2)] = rhs / Jet3(static_cast<double>((k + 1) * (k + 2)));
  }

  // scalar windows: wp derivatives, wpdot derivatives, zeta1 pieces, h_u
  LaurentWindow<cx> wp(lo, hi), wpdot(lo, hi), zeta1(lo, hi), zeta1p(lo, hi), zeta1dot(lo, hi),
      hu(lo, hi), hudot(lo, hi);
  wp.set(-2, 1.0);
  for (int j = 1; 2 * j <= hi; ++j) wp.set(2 * j, aj[static_cast<std::size_t>(j)].v);
  for (int j = 1; 2 * j <= hi; ++j) wpdot.set(2 * j, aj[static_cast<std::size_t>(j)].d1);
  // zeta = 1/z - sum a_j z^{2j+1}/(2j+1); zeta1 = -(zeta - eta1W z)/(2 pi i)
  zeta1.set(-1, -1.0 / kTwoPiI);
  zeta1.set(1, ctx.eta1_quasi() / kTwoPiI);
  zeta1dot.set(1, eta1W_dot / kTwoPiI);
  for (int j = 1; 2 * j + 1 <= hi; ++j) {
    zeta1.set(2 * j + 1, aj[static_cast<std::size_t>(j)].v / static_cast<double>(2 * j + 1) / kTwoPiI);
    zeta1dot.set(2 * j + 1,
                 aj[static_cast<std::size_t>(j)].d1 / static_cast<double>(2 * j + 1) / kTwoPiI);
  }
  zeta1p = zeta1.derivative().clamped(lo, hi);
  // h_u at u = 1/2: 1/z + sum_j (T_{2j} - a_j) z^{2j+1}/(2j+1), a_0 := 0
  hu.set(-1, 1.0);
  for (int j = 0; 2 * j + 1 <= hi; ++j) {
    Jet3 ajj = (j == 0) ? Jet3{} : aj[static_cast<std::size_t>(j)];
    Jet3 c = (T[static_cast<std::size_t>(2 * j)] - ajj) / Jet3(static_cast<double>(2 * j + 1));
    hu.set(2 * j + 1, c.v);
    hudot.set(2 * j + 1, c.d1);
  }

  auto lift = [&](const LaurentWindow<cx>& w, const G3& pre) {
    LaurentWindow<G3> r(lo, hi);
    for (int k = lo; k <= hi; ++k) {
      cx v = w.coeff(k);
      if (scalar_norm(v) == 0.0) continue;
      r.set(k, v * pre);
    }
    return r;
  };
  G3 one = detail_glue::g3_one(N);

  b.psi1 = lift(zeta1, -eta);
  b.psi1.add(0, theta);
  b.psi2 = lift(zeta1p, theta) + lift(zeta1dot, eta);
  b.Hu = lift(hu, one) + lift(hudot, theta * eta);
  b.psi1hu = window_mul(b.psi1, lift(hu, one), lo, hi);
  b.zeta1_u = ctx.zeta1(cx(0.5, 0.0));

  b.fh.assign(static_cast<std::size_t>(b.P) + 2, LaurentWindow<G3>(lo, hi));
  b.psih.assign(static_cast<std::size_t>(b.P) + 2, LaurentWindow<G3>(lo, hi));
  LaurentWindow<cx> d = wp, ddot = wpdot;
  for (int n = 2; n <= b.P + 1; ++n) {
    if (n > 2) {
      d = d.derivative().clamped(lo, hi);
      ddot = ddot.derivative().clamped(lo, hi);
    }
    double fact = 1.0;
    for (int i = 2; i <= n - 1; ++i) fact *= i;
    double nu = ((n % 2 == 0) ? 1.0 : -1.0) / fact;
    b.fh[static_cast<std::size_t>(n)] = lift(nu * d, one) + lift(nu * ddot, theta * eta);
    if (n >= 3) {
      // psih_n = nu (eta wpdot^{(n-3)} + theta wp^{(n-2)})
      LaurentWindow<cx> dprev = wpdot;
      for (int i = 0; i < n - 3; ++i) dprev = dprev.derivative().clamped(lo, hi);
      b.psih[static_cast<std::size_t>(n)] = lift(nu * dprev, eta) + lift(nu * d, theta);
    }
  }
  return b;
}

/// Coefficients of one global (-,-) differential on the enumerated basis.
struct MMSolution {
  int N = 0;
  bool extended = false;
  std::array<G2, 2> c_one, c_psi1, c_psi2, c_Hu, c_psi1hu;
  std::array<std::vector<G2>, 2> c_fh, c_psih;
  G2 phi0;
  std::array<LaurentWindow<G3>, 2> node;
};

inline LaurentWindow<G3> mm_omega_window(const MMSolution& s, const MMComponentBasis& b, int i) {
  const int lo = -b.P, hi = b.M;
  LaurentWindow<G3> w(lo, hi);
  auto addterm = [&](const LaurentWindow<G3>& basis, const G2& c) {
    if (!c.shaped() || c.is_zero()) return;
    G3 ce = embed_theta_algebra(c);
    for (int k = lo; k <= hi; ++k) {
      const G3& bc = basis.coeff(k);
      if (window_is_zero(bc)) continue;
      w.add(k, bc * ce);
    }
  };
  auto si = static_cast<std::size_t>(i);
  // constant term
  if (s.c_one[si].shaped() && !s.c_one[si].is_zero()) w.add(0, embed_theta_algebra(s.c_one[si]));
  addterm(b.psi1, s.c_psi1[si]);
  addterm(b.psi2, s.c_psi2[si]);
  for (std::size_t n = 2; n < s.c_fh[si].size(); ++n)
    addterm(b.fh[n], s.c_fh[si][n]);
  for (std::size_t n = 3; n < s.c_psih[si].size(); ++n)
    addterm(b.psih[n], s.c_psih[si][n]);
  if (s.extended) {
    addterm(b.Hu, s.c_Hu[si]);
    addterm(b.psi1hu, s.c_psi1hu[si]);
  }
  return w;
}

inline G2 even_part_g2(const G3& g) { return restrict_theta_free(theta_even_part(g)); }

/// Substituted glue term plus the phi_0 contribution for side i.
inline LaurentWindow<G3> mm_rhs_window(const MMSolution& s, int i, int P, int M) {
  auto r = detail_glue::substituted_node_term(s.node[static_cast<std::size_t>(1 - i)], i + 1, s.N,
                                              -P, M);
  if (s.phi0.shaped() && !s.phi0.is_zero()) {
    // side 1: -(theta/x) phi0; side 2: +(theta/x) phi0
    G3 term = detail_glue::gen3("theta", s.N) * embed_theta_algebra(s.phi0);
    r.add(-1, (i == 0) ? -term : term);
  }
  return r;
}

/// Solve the (-,-) glue relations by sweeps.  Seeds: the psi_1-coefficients
/// (a, b); for the extended (u-pole) space additionally phi0 and the two
/// constant coefficients are free, with the H_u coefficients absorbing the
/// x^{-1} matching.  In the module flavor the constants are determined by
/// the x^{-1} matching itself (the printed constraints t alpha, t beta).
inline MMSolution solve_minus_minus(const MMComponentBasis& b1, const MMComponentBasis& b2,
                                    const G2& seed_a, const G2& seed_b, bool extended = false,
                                    const G2& seed_phi0 = {}, const G2& seed_c1_side2 = {},
                                    const G2& seed_c1_side1 = {}) {
  const int N = b1.N, P = b1.P, M = b1.M;
  MMSolution s;
  s.N = N;
  s.extended = extended;
  auto z2 = [&] { return G2{gens_eta2()}; };
  for (int i = 0; i < 2; ++i) {
    auto si = static_cast<std::size_t>(i);
    s.c_one[si] = z2();
    s.c_psi2[si] = z2();
    s.c_Hu[si] = z2();
    s.c_psi1hu[si] = z2();
    s.c_fh[si].assign(static_cast<std::size_t>(P) + 2, z2());
    s.c_psih[si].assign(static_cast<std::size_t>(P) + 2, z2());
    s.node[si] = LaurentWindow<G3>(0, M);
  }
  s.c_psi1[0] = seed_a;
  s.c_psi1[1] = seed_b;
  s.phi0 = extended && seed_phi0.shaped() ? seed_phi0 : z2();
  if (extended) {
    if (seed_c1_side2.shaped()) s.c_one[1] = seed_c1_side2;
    if (seed_c1_side1.shaped()) s.c_one[0] = seed_c1_side1;
  }

  const MMComponentBasis* bb[2] = {&b1, &b2};
  for (int sweep = 0; sweep <= N + 3; ++sweep) {
    for (int i = 0; i < 2; ++i) {
      auto si = static_cast<std::size_t>(i);
      const MMComponentBasis& bas = *bb[si];
      auto rhs = mm_rhs_window(s, i, P, M);
      // residual against the current coefficients
      auto resid = rhs - mm_omega_window(s, bas, i);
      // theta channels first (exact unit poles): psi1hu at theta x^{-1},
      // psi2 at theta x^{-2} (unit 1/(2 pi i)), psih_n at theta x^{-n}
      if (extended) {
        G2 dc = theta_part(resid.coeff(-1));
        s.c_psi1hu[si] += dc;
        resid = rhs - mm_omega_window(s, bas, i);
      }
      s.c_psi2[si] += kTwoPiI * theta_part(resid.coeff(-2));
      resid = rhs - mm_omega_window(s, bas, i);
      for (int n = 3; n <= P; ++n) {
        G2 dc = theta_part(resid.coeff(-n));
        if (!dc.is_zero()) s.c_psih[si][static_cast<std::size_t>(n)] += dc;
      }
      resid = rhs - mm_omega_window(s, bas, i);
      // even channels
      if (extended) {
        s.c_Hu[si] += even_part_g2(resid.coeff(-1));
        resid = rhs - mm_omega_window(s, bas, i);
      }
      for (int n = 2; n <= P; ++n) {
        G2 dc = even_part_g2(resid.coeff(-n));
        if (!dc.is_zero()) s.c_fh[si][static_cast<std::size_t>(n)] += dc;
      }
    }
    if (!extended) {
      // constants from the x^{-1} matching of the opposite side:
      //   side-1 equation: +t phi_2[0] = W_1(-1);  side-2: -t phi_1[0] = W_2(-1)
      for (int i = 0; i < 2; ++i) {
        auto si = static_cast<std::size_t>(i);
        auto sj = static_cast<std::size_t>(1 - i);
        auto w = mm_omega_window(s, *bb[si], i);
        G2 lhs = even_part_g2(w.coeff(-1));
        double sgn = (i == 0) ? 1.0 : -1.0;
        G2 rest = even_part_g2(s.node[sj].coeff(0)) - s.c_one[sj];
        s.c_one[sj] = sgn * detail_glue::tshift2(lhs, -1) - rest;
      }
    }
    // node series = regular part of omega - substituted term
    for (int i = 0; i < 2; ++i) {
      auto si = static_cast<std::size_t>(i);
      auto w = mm_omega_window(s, *bb[si], i);
      auto rhs = mm_rhs_window(s, i, P, M);
      LaurentWindow<G3> phi(0, M);
      for (int k = 0; k <= M; ++k) phi.set(k, w.coeff(k) - rhs.coeff(k));
      s.node[si] = phi;
    }
  }
  return s;
}

inline double mm_glue_residual(const MMSolution& s, const MMComponentBasis& b1,
                               const MMComponentBasis& b2) {
  const MMComponentBasis* bb[2] = {&b1, &b2};
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    auto w = mm_omega_window(s, *bb[static_cast<std::size_t>(i)], i);
    auto rhs = mm_rhs_window(s, i, b1.P, b1.M);
    worst = std::max(worst, (w - rhs).polar_part().max_abs());
  }
  return worst;
}

// -- residues at the order-two points u_i (extended sections) ---------------

struct MMResidues {
  G2 even1, even2, theta1, theta2;  // s_i/(x_i-u_i) and s_i theta_i/(x_i-u_i)
};

inline MMResidues mm_u_residues(const MMSolution& s, const MMComponentBasis& b1,
                                const MMComponentBasis& b2) {
  MMResidues r;
  const MMComponentBasis* bb[2] = {&b1, &b2};
  for (int i = 0; i < 2; ++i) {
    auto si = static_cast<std::size_t>(i);
    const auto& bas = *bb[si];
    const char* eta_name = bas.side == 1 ? "eta1" : "eta2";
    int N = s.N;
    G3 psi1_at_u = detail_glue::gen3("theta", N) -
                   bas.zeta1_u * detail_glue::gen3(eta_name, N);
    // h_u ~ -1/(x-u) at u, so the residue element is -(c_H + psi1(u) c_psih)
    G3 res = -embed_theta_algebra(s.c_Hu[si]) - psi1_at_u * embed_theta_algebra(s.c_psi1hu[si]);
    if (i == 0) {
      r.even1 = even_part_g2(res);
      r.theta1 = theta_part(res);
    } else {
      r.even2 = even_part_g2(res);
      r.theta2 = theta_part(res);
    }
  }
  return r;
}

// -- normalized basis, period matrix, pullback of t -------------------------

struct MinusMinusPeriods {
  int N = 0;
  std::array<std::array<G2, 2>, 2> omega;  // Laurent in t on the eta1 eta2 part
  G2 pullback_t;                           // pi* t
  double class_residual = 0.0;  // size of coefficients without known classes (must be ~0 mod t^3)
};

/// Periods of the normalized (-,-) basis through order t^2: the
/// cohomology relations are s_i = f_i eta_i, s_i psi_1 = e_i + tau_i f_i,
/// s_i psi_2 = f_i; exact classes (psih_n, fh_n for n >= 3) drop, and the
/// fh_2 class does not enter below t^3.
inline MinusMinusPeriods minus_minus_period_matrix(const MMComponentBasis& b1,
                                                   const MMComponentBasis& b2) {
  const int N = b1.N;
  auto one2 = G2::scalar(gens_eta2(), TruncatedSeries::constant(Var::t, N, 1.0));
  auto zero2 = G2{gens_eta2()};
  MMSolution S1 = solve_minus_minus(b1, b2, one2, zero2);
  MMSolution S2 = solve_minus_minus(b1, b2, zero2, one2);
  const MMSolution* S[2] = {&S1, &S2};
  const MMComponentBasis* bb[2] = {&b1, &b2};

  MinusMinusPeriods out;
  out.N = N;
  // validity: coefficients without a known cohomology class must vanish
  // through t^2 (fh_2 is the first unknown class)
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i) {
      auto si = static_cast<std::size_t>(i);
      for (std::size_t n = 2; n < S[k]->c_fh[si].size(); ++n) {
        const auto& g = S[k]->c_fh[si][n];
        for (unsigned m = 0; m < g.n_terms(); ++m) {
          if (!g.term(m).shaped()) continue;
          for (int d = g.term(m).lo(); d <= std::min(2, g.term(m).order()); ++d)
            out.class_residual = std::max(out.class_residual, std::abs(g.term(m).coeff(d)));
        }
      }
    }

  // alpha-period matrix: e_i-coefficients (the psi_1 seeds)
  GMatrix<TruncatedSeries> Pm(2, 2);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i) Pm.at(k, i) = S[k]->c_psi1[static_cast<std::size_t>(i)];
  auto Minv = inverse_even(Pm);
  // f_i coefficients
  auto fcoef = [&](int k, int i) {
    auto si = static_cast<std::size_t>(i);
    const char* eta_name = bb[si]->side == 1 ? "eta1" : "eta2";
    G2 eta = G2::generator(gens_eta2(), eta_name, TruncatedSeries::constant(Var::t, N, 1.0));
    cx tau = bb[si]->ctx->tau();
    return tau * S[k]->c_psi1[si] + S[k]->c_psi2[si] + eta * S[k]->c_one[si];
  };
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      G2 acc{gens_eta2()};
      for (int m = 0; m < 2; ++m) acc += Minv.at(k, m) * fcoef(m, i);
      out.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = acc;
    }

  // pi* t = sqrt(Omega_12 / 2 pi i), branch with leading +t
  auto om12 = out.omega[0][1];
  out.pullback_t = ((1.0 / kTwoPiI) * om12).sqrt(+1);
  return out;
}

// -- the Berezinian comparison of the two determinant-line trivializations --

struct ThetaLambdaResult {
  G2 berezinian;          // expected -t^2 mod t^3
  double assembly_check;  // consistency of the solver-assembled pieces
};

/// Assemble the 5x5 matrix of (i, sigma): A + C0 -> B in the basis
/// (v1, v2, v, phi1, phi2) built by the extended solver, and return its
/// Berezinian.  The columns are (omega1, omega2, sigma(shat), sigma(s1/..),
/// sigma(s2/..)).
inline ThetaLambdaResult theta_lambda_berezinian(const MMComponentBasis& b1,
                                                 const MMComponentBasis& b2) {
  const int N = b1.N;
  auto one2 = G2::scalar(gens_eta2(), TruncatedSeries::constant(Var::t, N, 1.0));
  auto zero2 = G2{gens_eta2()};

  // module solutions = the normalized differentials
  MMSolution W1 = solve_minus_minus(b1, b2, one2, zero2);
  MMSolution W2 = solve_minus_minus(b1, b2, zero2, one2);
  // extended basis elements: seeds (psi1_1, psi1_2, phi0, c1_2, c1_1)
  MMSolution V = solve_minus_minus(b1, b2, zero2, zero2, true, one2, zero2, zero2);
  MMSolution F1 = solve_minus_minus(b1, b2, zero2, zero2, true, zero2, one2, zero2);
  MMSolution F2 = solve_minus_minus(b1, b2, zero2, zero2, true, zero2, zero2, one2);

  ThetaLambdaResult out{G2{gens_eta2()}, 0.0};

  // residues of the basis elements at the u_i
  auto rV = mm_u_residues(V, b1, b2);
  auto rF1 = mm_u_residues(F1, b1, b2);
  auto rF2 = mm_u_residues(F2, b1, b2);
  // residue-theorem consistency and sigma structure checks (valid mod t^3)
  auto low_abs = [](const G2& g, int kmax) {
    double m = 0.0;
    if (!g.shaped()) return m;
    for (unsigned mm = 0; mm < g.n_terms(); ++mm) {
      if (!g.term(mm).shaped()) continue;
      for (int d = g.term(mm).lo(); d <= std::min(kmax, g.term(mm).order()); ++d)
        m = std::max(m, std::abs(g.term(mm).coeff(d)));
    }
    return m;
  };
  out.assembly_check = std::max(out.assembly_check, low_abs(rV.theta1 + rV.theta2, 2));
  out.assembly_check = std::max(out.assembly_check, low_abs(rF1.theta1, 2));
  out.assembly_check = std::max(out.assembly_check, low_abs(rF2.theta2, 2));
  out.assembly_check = std::max(out.assembly_check, low_abs(rF1.even2, 2));
  out.assembly_check = std::max(out.assembly_check, low_abs(rF2.even1, 2));

  // sigma(s1/(x1-u1)) = phi1 / rho1, sigma(s2/..) = phi2 / rho2 with rho the
  // computed even residues; sigma(shat) = (V - c1 sigma(s1) - c2 sigma(s2)) / rho_v
  G2 rho1 = rF1.even1;
  G2 rho2 = rF2.even2;
  G2 rho_v = rV.theta1;  // theta-residue of V (should be 1 + O(t^2))
  G2 c1 = rV.even1, c2 = rV.even2;

  // matrix in the basis (v1, v2, v, phi1, phi2); columns as described
  SuperMatrix<TruncatedSeries> m(3, 2);
  auto zt = [&] { return G2::scalar(gens_eta2(), TruncatedSeries(Var::t, N)); };
  for (auto& e : m.m.e) e = zt();
  auto rho_v_inv = rho_v.inverse();
  auto rho1_inv = rho1.inverse(), rho2_inv = rho2.inverse();
  // columns 0,1: i(omega^(k)): coefficients are the canonical coordinates
  m.m.at(0, 0) = one2;
  m.m.at(3, 0) = W1.c_one[1];  // phi1-row: side-2 constant of omega^(1)
  m.m.at(4, 0) = W1.c_one[0];
  m.m.at(1, 1) = one2;
  m.m.at(3, 1) = W2.c_one[1];
  m.m.at(4, 1) = W2.c_one[0];
  // column 2: sigma(shat) = [V - c1 phi1 rho1^{-1} - c2 phi2 rho2^{-1}] rho_v^{-1}
  m.m.at(2, 2) = rho_v_inv;
  m.m.at(3, 2) = -(rho1_inv * c1) * rho_v_inv;
  m.m.at(4, 2) = -(rho2_inv * c2) * rho_v_inv;
  // columns 3,4: sigma(s_i/(x_i-u_i)) = phi_i rho_i^{-1}
  m.m.at(3, 3) = rho1_inv;
  m.m.at(4, 4) = rho2_inv;

  out.berezinian = berezinian(m);
  return out;
}

}  // namespace superperiod
