#pragma once

#include <array>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "superperiod/superperiod.hpp"

namespace superperiod {

// ---------------------------------------------------------------------------
// Hyperelliptic branch-point geometry: y^2 = prod (x - u_i)(x - v_i), the
// even spin structure given by the 3+3 partition of the ramification locus.
// ---------------------------------------------------------------------------

struct BranchConfig {
  std::array<cx, 3> u{};
  std::array<cx, 3> v{};

  std::array<cx, 6> all() const { return {u[0], u[1], u[2], v[0], v[1], v[2]}; }

  void require_distinct(double tol = 1e-12) const {
    auto pts = all();
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j)
        if (std::abs(pts[i] - pts[j]) < tol) {
          std::ostringstream os;
          os << "coincident branch points #" << i << " and #" << j;
          throw std::domain_error(os.str());
        }
  }
};

/// Branch points of the glued genus-2 family: a_i = -1/f(alpha_i),
/// b_i = -q^2 f(beta_i) with f = wp mod q^4, refinable through the even
/// gluing solution.  The spin partition is (a1, b2, b3) | (b1, a2, a3).
struct GluedBranchPoints {
  std::array<cx, 3> a{}, b{};
  // d(point)/d(tau1, tau2, q)
  std::array<std::array<cx, 3>, 3> jac_a{}, jac_b{};
  cx tau1, tau2, q;

  BranchConfig config() const {
    BranchConfig c;
    c.u = {a[0], b[1], b[2]};
    c.v = {b[0], a[1], a[2]};
    return c;
  }
  std::array<std::array<cx, 3>, 6> jacobians() const {
    return {jac_a[0], jac_b[1], jac_b[2], jac_b[0], jac_a[1], jac_a[2]};
  }
};

inline GluedBranchPoints glued_branch_points(cx tau1, cx tau2, cx q, bool refine, int order = 6) {
  EllipticContext c1(tau1), c2(tau2);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(c1.e(i)) < 1e-12 || std::abs(c2.e(i)) < 1e-12)
      throw std::domain_error("glued_branch_points: wp(alpha_i) = 0 excluded locus");
  }
  GluedBranchPoints out;
  out.tau1 = tau1;
  out.tau2 = tau2;
  out.q = q;

  // f(u)(q) as jet-valued q-series: f = -omega^(2)_1(u) / (q omega^(1)_1(u))
  // on component 1 and the mirrored ratio on component 2.
  const int N = refine ? order : 1;
  auto j1 = even_component_jets(c1, N + 2, 1);
  auto j2 = even_component_jets(c2, N + 2, 2);
  auto sol = solve_even_basis<Jet3>(j1, j2, N);

  auto eval_f = [&](int comp, int p) {
    // numerator/denominator series at the half-period w_p of the component
    const auto& fv = (comp == 0 ? j1 : j2).fvals[static_cast<std::size_t>(p)];
    BasicSeries<Jet3> num(Var::q, N), den(Var::q, N);
    den += BasicSeries<Jet3>::constant(Var::q, N, Jet3(1.0));
    int self = comp, other = 1 - comp;
    for (int n = 2; n <= N + 2; ++n) {
      const Jet3& f = fv[static_cast<std::size_t>(n)];
      if (scalar_norm(f) == 0.0) continue;
      den += f * sol.coeff[static_cast<std::size_t>(self)][static_cast<std::size_t>(comp)]
                     .at(static_cast<std::size_t>(n));
      num += f * sol.coeff[static_cast<std::size_t>(other)][static_cast<std::size_t>(comp)]
                     .at(static_cast<std::size_t>(n));
    }
    // f = -num/(q den): num is divisible by q
    auto ratio = -(num * den.inverse());
    return ratio.shifted(-1);
  };

  for (int i = 0; i < 3; ++i) {
    auto fa = eval_f(0, i);
    auto fb = eval_f(1, i);
    // evaluate jets at the numeric q
    auto val = [&](const BasicSeries<Jet3>& s, cx at) {
      Jet3 acc{};
      for (int k = s.order(); k >= s.lo(); --k) acc = acc * Jet3(at) + s.coeff(k);
      for (int k = 0; k > s.lo(); --k) acc = acc / Jet3(at);
      return acc;
    };
    auto dq = [&](const BasicSeries<Jet3>& s, cx at) {
      Jet3 r{};
      for (int k = s.order(); k >= s.lo(); --k) {
        if (k == 0) continue;
        Jet3 c = Jet3(static_cast<double>(k)) * s.coeff(k);
        r += c * Jet3(std::pow(at, k - 1));
      }
      return r;
    };
    Jet3 fa_v = val(fa, q), fb_v = val(fb, q);
    Jet3 fa_q = dq(fa, q), fb_q = dq(fb, q);
    out.a[static_cast<std::size_t>(i)] = -1.0 / fa_v.v;
    // da = df/f^2 per variable
    cx fa2 = fa_v.v * fa_v.v;
    out.jac_a[static_cast<std::size_t>(i)] = {fa_v.d1 / fa2, fa_v.d2 / fa2, fa_q.v / fa2};
    out.b[static_cast<std::size_t>(i)] = -q * q * fb_v.v;
    out.jac_b[static_cast<std::size_t>(i)] = {-q * q * fb_v.d1, -q * q * fb_v.d2,
                                              -2.0 * q * fb_v.v - q * q * fb_q.v};
  }
  return out;
}

// ---------------------------------------------------------------------------
// The sl2 volume contraction.  For n marked points with differentials
// expressed on a k = n-3 dimensional base,
//   vol^{-1} dp_1...dp_n = sum_{a<b<c} (-1)^{a+b+c} (p_a-p_b)(p_b-p_c)(p_c-p_a)
//                          det(jacobian rows of the complement) d(base).
// ---------------------------------------------------------------------------

inline cx det3(const std::array<cx, 3>& r0, const std::array<cx, 3>& r1,
               const std::array<cx, 3>& r2) {
  return r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
         r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
}

/// Six points over a three-parameter base.
inline cx vol_contraction6(const std::array<cx, 6>& p,
                           const std::array<std::array<cx, 3>, 6>& jac) {
  cx acc = 0.0;
  for (int aa = 0; aa < 6; ++aa)
    for (int bb = aa + 1; bb < 6; ++bb)
      for (int cc = bb + 1; cc < 6; ++cc) {
        std::array<std::array<cx, 3>, 3> rows{};
        int k = 0;
        for (int i = 0; i < 6; ++i)
          if (i != aa && i != bb && i != cc) rows[static_cast<std::size_t>(k++)] = jac[static_cast<std::size_t>(i)];
        cx delta = (p[static_cast<std::size_t>(aa)] - p[static_cast<std::size_t>(bb)]) *
                   (p[static_cast<std::size_t>(bb)] - p[static_cast<std::size_t>(cc)]) *
                   (p[static_cast<std::size_t>(cc)] - p[static_cast<std::size_t>(aa)]);
        double sign = ((aa + bb + cc + 3) % 2 == 0) ? 1.0 : -1.0;  // 1-based (-1)^{a+b+c}
        acc += sign * delta * det3(rows[0], rows[1], rows[2]);
      }
  return acc;
}

/// Four points over a one-parameter base (genus-1 flavor).
inline cx vol_contraction4(const std::array<cx, 4>& p, const std::array<cx, 4>& dp) {
  cx acc = 0.0;
  for (int aa = 0; aa < 4; ++aa)
    for (int bb = aa + 1; bb < 4; ++bb)
      for (int cc = bb + 1; cc < 4; ++cc) {
        int dd = 6 - aa - bb - cc;
        cx delta = (p[static_cast<std::size_t>(aa)] - p[static_cast<std::size_t>(bb)]) *
                   (p[static_cast<std::size_t>(bb)] - p[static_cast<std::size_t>(cc)]) *
                   (p[static_cast<std::size_t>(cc)] - p[static_cast<std::size_t>(aa)]);
        double sign = ((aa + bb + cc + 3) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * delta * dp[static_cast<std::size_t>(dd)];
      }
  return acc;
}

// ---------------------------------------------------------------------------
// Genus-1 Mumford data in the hyperelliptic model (0, 1/e1, 1/e2, 1/e3).
// ---------------------------------------------------------------------------

/// F = (u1-u2)^{-1} (v1-v2)^{-1} prod_{i,j} (u_i - v_j)^{-2}
inline cx genus1_mumford_F(cx u1, cx u2, cx v1, cx v2) {
  cx den = (u1 - u2) * (v1 - v2);
  for (cx ui : {u1, u2})
    for (cx vj : {v1, v2}) den *= (ui - vj) * (ui - vj);
  if (scalar_norm(den) == 0.0) throw std::domain_error("genus1_mumford_F: coincident points");
  return 1.0 / den;
}

/// c_spin with spin in {1,2,3}: the partition pairs 0 with e_spin^{-1}.
/// Defined through the standard model above with the (pair | rest) point
/// ordering; the spin sum vanishes by the quadruple Pluecker identity.
///
/// Normalized against the intrinsic trivialization s = dz: in this model the
/// monic-curve differential is dx/y = -sqrt(g3) dz, so the dz-normalized
/// coefficient is F a / g3^3 (weight -4, the theta-quartic structure).
inline cx genus1_mumford_coefficient(const EllipticContext& ctx, int spin) {
  std::array<cx, 4> pts{cx(0.0), 0.0, 0.0, 0.0};
  std::array<cx, 4> dpt{cx(0.0), 0.0, 0.0, 0.0};
  std::array<cx, 3> einv, deinv;
  for (int i = 0; i < 3; ++i) {
    cx e = ctx.e(i);
    if (std::abs(e) < 1e-12) throw std::domain_error("genus1 coefficient: e-value vanishes");
    einv[static_cast<std::size_t>(i)] = 1.0 / e;
    deinv[static_cast<std::size_t>(i)] = -ctx.e_tau_derivative(i) / (e * e);
  }
  int s = spin - 1;
  if (s < 0 || s > 2) throw std::invalid_argument("spin must be 1, 2 or 3");
  int r0 = (s == 0) ? 1 : 0;
  int r1 = (s == 2) ? 1 : 2;
  // ordering: (0, e_s^{-1} | e_{r0}^{-1}, e_{r1}^{-1}) with r0 < r1 as indices
  pts[1] = einv[static_cast<std::size_t>(s)];
  dpt[1] = deinv[static_cast<std::size_t>(s)];
  pts[2] = einv[static_cast<std::size_t>(r0)];
  dpt[2] = deinv[static_cast<std::size_t>(r0)];
  pts[3] = einv[static_cast<std::size_t>(r1)];
  dpt[3] = deinv[static_cast<std::size_t>(r1)];
  cx F = genus1_mumford_F(pts[0], pts[1], pts[2], pts[3]);
  cx a = vol_contraction4(pts, dpt);
  return F * a / std::pow(ctx.g3(), 3);
}

// ---------------------------------------------------------------------------
// Genus-2 densities (the hyperelliptic Mumford-form avatars).
// ---------------------------------------------------------------------------

struct MumfordDensity {
  cx diff_product;  // prod_{i<j}(u_i-u_j)(v_i-v_j) prod_{k,l}(u_k-v_l)^2
  cx Q;             // 3c3(u) - c2(u)c1(v) + c1(u)c2(v) - 3c3(v)
  cx density1;      // 1/diff_product (bosonic restriction, chi-trivialized)
  cx density2;      // Q/diff_product (canonical-projection pushforward)
};

inline std::array<cx, 3> elementary_symmetric3(const std::array<cx, 3>& x) {
  cx c1 = x[0] + x[1] + x[2];
  cx c2 = x[0] * x[1] + x[0] * x[2] + x[1] * x[2];
  cx c3 = x[0] * x[1] * x[2];
  return {c1, c2, c3};
}

inline cx witten_Q(const std::array<cx, 3>& u, const std::array<cx, 3>& v) {
  auto cu = elementary_symmetric3(u);
  auto cv = elementary_symmetric3(v);
  return 3.0 * cu[2] - cu[1] * cv[0] + cu[0] * cv[1] - 3.0 * cv[2];
}

inline MumfordDensity genus2_densities(const BranchConfig& cfg) {
  cfg.require_distinct();
  cx prod = 1.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      prod *= (cfg.u[static_cast<std::size_t>(i)] - cfg.u[static_cast<std::size_t>(j)]) *
              (cfg.v[static_cast<std::size_t>(i)] - cfg.v[static_cast<std::size_t>(j)]);
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      cx d = cfg.u[static_cast<std::size_t>(k)] - cfg.v[static_cast<std::size_t>(l)];
      prod *= d * d;
    }
  MumfordDensity md;
  md.diff_product = prod;
  md.Q = witten_Q(cfg.u, cfg.v);
  md.density1 = 1.0 / prod;
  md.density2 = md.Q / prod;
  return md;
}

// -- Moebius transport for the invariance checks ----------------------------

struct Mobius {
  cx p, r, s, w;  // x -> (p x + r)/(s x + w), p w - r s = 1
  cx operator()(cx x) const { return (p * x + r) / (s * x + w); }
  cx dfactor(cx x) const { return 1.0 / ((s * x + w) * (s * x + w)); }  // d(gx)/dx
};

/// Weight of the lambda^5 (and chi1 wedge chi2, if with_chi) trivializations
/// under the map; the density values transform by exactly this factor, which
/// is what the invariance tests assert.
inline cx mobius_density_weight(const Mobius& g, const std::array<cx, 6>& pts, bool with_chi) {
  cx acc = 1.0;
  for (cx e : pts) {
    cx f = g.s * e + g.w;
    acc *= with_chi ? std::pow(f, 6) : std::pow(f, 5);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Leading pushforward data near the separating node and the polar term of
// the measure.
// ---------------------------------------------------------------------------

struct PushforwardLeading {
  cx A, B, C;
  cx a;  // A/(B C), the leading coefficient up to the universal constant
};

inline PushforwardLeading pushforward_leading(cx tau1, cx tau2) {
  EllipticContext c1(tau1), c2(tau2);
  std::array<cx, 3> e, de, wb, dwb;
  for (int i = 0; i < 3; ++i) {
    e[static_cast<std::size_t>(i)] = c1.e(i);
    de[static_cast<std::size_t>(i)] = c1.e_tau_derivative(i);
    wb[static_cast<std::size_t>(i)] = c2.e(i);
    dwb[static_cast<std::size_t>(i)] = c2.e_tau_derivative(i);
  }
  // A = 2 sum_{k} (-1)^{i+j} (e_j - e_i) dwp(alpha_k)  x
  //       sum_{k'} (-1)^{k'} det[[wp(b_i'), dwp(b_i')], [wp(b_j'), dwp(b_j')]]
  // with {i<j} the complement of k (1-based signs).
  auto csum = [&](const std::array<cx, 3>& ev, const std::array<cx, 3>& dev, bool first) {
    cx acc = 0.0;
    for (int k = 0; k < 3; ++k) {
      int i = (k == 0) ? 1 : 0;
      int j = (k == 2) ? 1 : 2;
      if (first) {
        double sign = ((i + j + 2) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{i+j}, 1-based
        acc += sign * (ev[static_cast<std::size_t>(j)] - ev[static_cast<std::size_t>(i)]) *
               dev[static_cast<std::size_t>(k)];
      } else {
        double sign = ((k + 1) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{k'}, 1-based
        cx det = ev[static_cast<std::size_t>(i)] * dev[static_cast<std::size_t>(j)] -
                 ev[static_cast<std::size_t>(j)] * dev[static_cast<std::size_t>(i)];
        acc += sign * det;
      }
    }
    return acc;
  };
  PushforwardLeading out;
  out.A = 2.0 * csum(e, de, true) * csum(wb, dwb, false);
  out.B = (e[1] - e[2]) * (wb[2] - wb[1]);
  out.C = (e[0] - e[1]) * (e[0] - e[1]) * (e[0] - e[2]) * (e[0] - e[2]) * (wb[0] - wb[1]) *
          (wb[0] - wb[1]) * (wb[0] - wb[2]) * (wb[0] - wb[2]);
  if (scalar_norm(out.B) == 0.0 || scalar_norm(out.C) == 0.0)
    throw std::domain_error("pushforward_leading: e-value collision");
  out.a = out.A / (out.B * out.C);
  return out;
}

struct MeasurePolarTerm {
  cx unfactored;  // -40 pi^2 h0^6 c cbar / leading assembly
  cx factored;    // -40 pi^2 (h1 h2)^6 (Psi1 x Psi1)(conj) grouping
};

/// Leading polar coefficient of the two-sector measure over the separating
/// node, with the conjugate-sector coefficients evaluated at conj(tau~) and
/// conjugated.  Spin choices per leg select the genus-1 coefficients.
inline MeasurePolarTerm measure_polar_term(cx tau1, cx taut1, cx tau2, cx taut2, int spin1 = 1,
                                           int spin2 = 1, int spin1c = 0, int spin2c = 0) {
  if (std::abs(taut1 - tau1) < 1e-12 || std::abs(taut2 - tau2) < 1e-12)
    throw std::domain_error("measure_polar_term: sector collision");
  if (spin1c == 0) spin1c = spin1;
  if (spin2c == 0) spin2c = spin2;
  EllipticContext c1(tau1), c2(tau2);
  EllipticContext c1c(std::conj(taut1)), c2c(std::conj(taut2));
  cx g1 = genus1_mumford_coefficient(c1, spin1);
  cx g2v = genus1_mumford_coefficient(c2, spin2);
  cx g1c = std::conj(genus1_mumford_coefficient(c1c, spin1c));
  cx g2c = std::conj(genus1_mumford_coefficient(c2c, spin2c));

  MeasurePolarTerm out;
  cx h0 = 1.0 / ((taut1 - tau1) * (taut2 - tau2));
  cx c = g1 * g2v, cbar = g1c * g2c;
  out.unfactored = -40.0 * kPi * kPi * std::pow(h0, 6) * c * cbar;
  cx h1 = 1.0 / (taut1 - tau1), h2 = 1.0 / (taut2 - tau2);
  out.factored = -40.0 * kPi * kPi * std::pow(h1, 6) * std::pow(h2, 6) * (g1 * g1c) * (g2v * g2c);
  return out;
}


// ---------------------------------------------------------------------------
// Leading behavior of the twisted-differential basis (chi_1, t chi_2) over
// the glued family: both stay regular in t away from g_3(tau_1) = 0, with
// chi_1 ~ (kappa_1(x_1), t kappa_2(x_2)) and t chi_2 ~ (-t kappa_2(x_1),
// kappa_1(x_2)) up to one overall branch-dependent constant each.
//
// All identities are arranged as window products (multiplying through by
// the w^(2)-component), so no Laurent-window division is needed.
// ---------------------------------------------------------------------------

using TSWindow = LaurentWindow<TruncatedSeries>;

struct ChiBasisLimit {
  // component windows (t-series coefficients) of
  //   t^{-2} (x - a_1) s_1 w^(2)  and  t^{-4} (x - b_1) s_2 w^(2),
  // each times the local w^(2)-component (poles in x retain their glue
  // t-weights); the kappa structure sits at the stated t-slices.
  TSWindow chi1_comp1, chi1_comp2, chi2_comp1, chi2_comp2;
  double regularity_violation = 0.0;  // largest coefficient at negative t-powers
  cx lambda1_comp1{}, lambda1_comp2{};  // kappa-proportionality factors
  cx lambda2_comp1{}, lambda2_comp2{};
  double kappa_match = 0.0;     // window mismatch of the proportionality claims
  double square_compare = 0.0;  // branch-independent square-vs-spin-relation check
};

inline ChiBasisLimit chi_basis_limit(cx tau1, cx tau2, int N = 8) {
  EllipticContext c1(tau1), c2(tau2);
  if (std::abs(c1.g3()) < 1e-9 * std::pow(kPi, 6))
    throw std::domain_error("chi_basis_limit: singular locus g3(tau1) = 0");
  const int Nq = N / 2;
  const int P = N + 2, M = N + 2;
  const int LO1 = -(P + Nq + 4);        // one window product deep
  const int LO2 = LO1 - (Nq + 2);       // two products deep
  LaurentBasis lb1(c1, 0, P, M), lb2(c2, 0, P, M);
  auto d1 = even_component_values(c1, Nq + 2);
  auto d2 = even_component_values(c2, Nq + 2);
  auto even = solve_even_basis<cx>(d1, d2, Nq);
  auto s1 = solve_odd_section(lb1, lb2, N, 1);
  auto s2 = solve_odd_section(lb1, lb2, N, 2);

  auto q_to_t_local = [&](const TruncatedSeries& s) {
    return s.substitute_monomial(Var::t, N, cx(-1.0), 2);
  };
  // window of one even-basis component function, coefficients as t-series
  auto even_window = [&](int which, int comp) {
    const LaurentBasis& lb = comp == 0 ? lb1 : lb2;
    TSWindow w(-P, M);
    TruncatedSeries lead(Var::t, N);
    lead.set_coeff(0, even.lead[static_cast<std::size_t>(which)][static_cast<std::size_t>(comp)]);
    w.set(0, lead);
    for (int n = 2; n <= Nq + 2; ++n) {
      auto coef = q_to_t_local(even.coeff[static_cast<std::size_t>(which)][static_cast<std::size_t>(comp)]
                                   .at(static_cast<std::size_t>(n)));
      if (coef.is_zero()) continue;
      const auto& fn = lb.f(n);
      for (int k = -P; k <= M; ++k) {
        cx f = fn.coeff(k);
        if (scalar_norm(f) == 0.0) continue;
        w.add(k, f * coef);
      }
    }
    return w;
  };
  // f(u)(q) series per component and half-period, as t-series constants
  auto f_of = [&](int comp, int p) {
    const auto& fv = (comp == 0 ? d1 : d2).fvals[static_cast<std::size_t>(p)];
    TruncatedSeries num(Var::q, Nq), den(Var::q, Nq);
    den.set_coeff(0, 1.0);
    for (int n = 2; n <= Nq + 2; ++n) {
      if (scalar_norm(fv[static_cast<std::size_t>(n)]) == 0.0) continue;
      den += fv[static_cast<std::size_t>(n)] *
             even.coeff[static_cast<std::size_t>(comp)][static_cast<std::size_t>(comp)]
                 .at(static_cast<std::size_t>(n));
      num += fv[static_cast<std::size_t>(n)] *
             even.coeff[static_cast<std::size_t>(1 - comp)][static_cast<std::size_t>(comp)]
                 .at(static_cast<std::size_t>(n));
    }
    return q_to_t_local(-(num * den.inverse()).shifted(-1));
  };

  auto W11 = even_window(0, 0), W12 = even_window(0, 1);
  auto W21 = even_window(1, 0), W22 = even_window(1, 1);
  auto F1_1 = odd_section_window(s1, lb1, 0), F1_2 = odd_section_window(s1, lb2, 1);
  auto F2_1 = odd_section_window(s2, lb1, 0), F2_2 = odd_section_window(s2, lb2, 1);

  auto tsq = TruncatedSeries::monomial(Var::t, N, 2, -1.0);  // q = -t^2
  TruncatedSeries a1 = -(f_of(0, 0).inverse());
  TruncatedSeries b1 = (-1.0) * f_of(1, 0).shifted(4);  // -q^2 f(beta_1), q^2 = t^4

  // (x - c) w^(2) = q w^(1) - c w^(2): pure window combinations
  auto x_minus = [&](const TSWindow& w1, const TSWindow& w2, const TruncatedSeries& c) {
    TSWindow r(-P, M);
    for (int k = -P; k <= M; ++k) {
      TruncatedSeries acc = tsq * w1.coeff(k) - c * w2.coeff(k);
      if (!acc.is_zero()) r.set(k, acc);
    }
    return r;
  };
  auto shift_all = [&](TSWindow w, int sh) {
    TSWindow r(w.lo(), w.hi());
    for (int k = w.lo(); k <= w.hi(); ++k) {
      auto v = w.coeff(k);
      if (!v.shaped() || v.is_zero()) continue;
      r.set(k, v.shifted(sh));
    }
    return r;
  };

  ChiBasisLimit out;
  out.chi1_comp1 = shift_all(window_mul(x_minus(W11, W21, a1), F1_1, LO1, M), -2);
  out.chi1_comp2 = shift_all(window_mul(x_minus(W12, W22, a1), F1_2, LO1, M), -2);
  out.chi2_comp1 = shift_all(window_mul(x_minus(W11, W21, b1), F2_1, LO1, M), -4);
  out.chi2_comp2 = shift_all(window_mul(x_minus(W12, W22, b1), F2_2, LO1, M), -4);

  // regularity: no negative t-powers (interior of the window, where the
  // truncation fully determines the coefficients)
  auto neg_part = [&](const TSWindow& w) {
    double m = 0.0;
    for (int k = -P; k <= w.hi() - 3; ++k) {
      const auto& v = w.coeff(k);
      if (!v.shaped()) continue;
      for (int d = v.lo(); d < 0; ++d) m = std::max(m, std::abs(v.coeff(d)));
    }
    return m;
  };
  out.regularity_violation = std::max({neg_part(out.chi1_comp1), neg_part(out.chi1_comp2),
                                       neg_part(out.chi2_comp1), neg_part(out.chi2_comp2)});

  // leading kappa-proportionality
  auto t_slice = [&](const TSWindow& w, int tdeg) {
    LaurentWindow<cx> r(w.lo(), w.hi());
    for (int k = w.lo(); k <= w.hi(); ++k) {
      const auto& v = w.coeff(k);
      if (!v.shaped()) continue;
      cx c = v.coeff(tdeg);
      if (scalar_norm(c) != 0.0) r.set(k, c);
    }
    return r;
  };
  auto fit_against = [&](const LaurentWindow<cx>& w, const LaurentWindow<cx>& basis, int lead_deg,
                         cx& lambda) {
    lambda = w.coeff(lead_deg) / basis.coeff(lead_deg);
    double m = 0.0;
    double scale = std::max(w.max_abs(), 1e-30);
    for (int k = -P; k <= std::min(w.hi() - 3, basis.hi() - 3); ++k)
      m = std::max(m, std::abs(w.coeff(k) - lambda * basis.coeff(k)) / scale);
    return m;
  };
  out.kappa_match = std::max(
      {fit_against(t_slice(out.chi1_comp1, 0), lb1.kappa(1), -1, out.lambda1_comp1),
       fit_against(t_slice(out.chi1_comp2, 1), lb2.kappa(2), -2, out.lambda1_comp2),
       fit_against(t_slice(out.chi2_comp1, 1), lb1.kappa(2), -2, out.lambda2_comp1),
       fit_against(t_slice(out.chi2_comp2, 0), lb2.kappa(1), -1, out.lambda2_comp2)});

  // branch-independent square comparison, multiplied through:
  //   F_1^2 (q w^(1) + f(a_1)^{-1} w^(2)) w^(2)
  //     = -q^{-1}(wp(a_1)^{-1} + O(q^2)) (q w^(1) + q^2 f(b_2) w^(2))
  //                                      (q w^(1) + q^2 f(b_3) w^(2))
  // The per-degree TS ratios of the two sides must agree on an x-constant
  // whose leading term is t^{-2} / wp(alpha_1).
  {
    auto lhs_a = window_mul(window_mul(F1_1, F1_1, LO1, M), x_minus(W11, W21, -(f_of(0, 0).inverse())),
                            LO2, M);
    auto lhs = window_mul(lhs_a, W21, LO2 - P, M);
    auto r1 = x_minus(W11, W21, (-1.0) * f_of(1, 1).shifted(4));
    auto r2 = x_minus(W11, W21, (-1.0) * f_of(1, 2).shifted(4));
    auto rhs = window_mul(window_mul(r1, r2, LO2, M), W21, LO2 - P, M);
    // cross-multiplication keeps everything at full truncation precision:
    // the ratio lhs/rhs is an x-constant iff lv * rv_ref == lv_ref * rv
    std::vector<std::pair<TruncatedSeries, TruncatedSeries>> pairs;
    auto clean = [](const TruncatedSeries& x) {
      TruncatedSeries r(x.var(), x.order());
      double thr = 1e-11 * x.max_abs();
      for (int d = x.lo(); d <= x.order(); ++d)
        if (std::abs(x.coeff(d)) > thr) r.set_coeff(d, x.coeff(d));
      return r;
    };
    int best_val = 1000;
    std::size_t ref = 0;
    for (int k = LO2 - P + 4; k <= M - 4; ++k) {
      const auto& lv = lhs.coeff(k);
      const auto& rv = rhs.coeff(k);
      if (!lv.shaped() || !rv.shaped() || lv.max_abs() < 1e-9 || rv.max_abs() < 1e-9) continue;
      pairs.emplace_back(clean(lv), clean(rv));
      int val = pairs.back().second.lowest_nonzero();
      if (val < best_val) {
        best_val = val;
        ref = pairs.size() - 1;
      }
    }
    double worst = pairs.empty() ? 1.0 : 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i == ref) continue;
      auto cross1 = pairs[i].first * pairs[ref].second;
      auto cross2 = pairs[ref].first * pairs[i].second;
      worst = std::max(worst, series_rel_dist(cross1, cross2));
    }
    out.square_compare = worst;
    if (!pairs.empty()) {
      auto ratio = pairs[ref].first * pairs[ref].second.inverse();
      cx lead = ratio.coeff(-2);
      out.square_compare =
          std::max(out.square_compare, std::abs(lead - 1.0 / c1.e(0)) * std::abs(c1.e(0)));
        } else {
      out.square_compare = 1.0;
    }
  }
  return out;
}

}  // namespace superperiod
