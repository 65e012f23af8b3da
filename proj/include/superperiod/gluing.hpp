#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "superperiod/elliptic.hpp"
#include "superperiod/grassmann.hpp"
#include "superperiod/laurent.hpp"
#include "superperiod/supermatrix.hpp"

namespace superperiod {

// ---------------------------------------------------------------------------
// Classical (even) separating-node gluing: x1 x2 = q.
//
// omega_1(x1) = phi_1(x1) dx1 - q phi_2(q/x1) dx1/x1^2  and symmetrically.
// The basis element omega^(k) has leading term dx_k; all other coefficients
// sit on the pole-normalized functions f_n.  Solved as a fixed point: the
// polar part determines the f-coefficients from the node series, the node
// series is the regular part, and every round trip gains a power of q.
// ---------------------------------------------------------------------------

template <class S>
struct EvenBasisSolution {
  int N = 0;
  // coeff[which][component][n]: q-series coefficient of f_n(x_component)
  std::array<std::array<std::vector<BasicSeries<S>>, 2>, 2> coeff;
  // node[which][side][k]: q-series coefficient of x_side^k in phi_side
  std::array<std::array<std::vector<BasicSeries<S>>, 2>, 2> node;
  std::array<std::array<S, 2>, 2> lead;  // delta_{which,component}

  BasicSeries<S> f_coeff(int which, int comp, int n) const {
    return coeff[static_cast<std::size_t>(which)][static_cast<std::size_t>(comp)]
        .at(static_cast<std::size_t>(n));
  }
};

template <class S>
EvenBasisSolution<S> solve_even_basis(const EvenComponentData<S>& c1, const EvenComponentData<S>& c2,
                                      int N) {
  if (N < 1) throw std::invalid_argument("solve_even_basis: N >= 1");
  const int nmax = N + 2;  // f_n indices
  const int M = N + 2;     // node x-degrees
  EvenBasisSolution<S> sol;
  sol.N = N;

  // regular parts of f_n per component, as x-coefficient tables [n][k]
  auto f_regular = [&](const EvenComponentData<S>& c) {
    std::vector<std::vector<S>> reg(static_cast<std::size_t>(nmax) + 1,
                                    std::vector<S>(static_cast<std::size_t>(M) + 1));
    // f_2 = wp: regular coefficients a_j at degree 2j
    // f_{n} = +- wp^{(n-2)}/(n-1)! with the constant removed: derivative of
    // the degree-(2j) tail.
    for (int n = 2; n <= nmax; ++n) {
      for (int j = 1; j <= (M + n) / 2; ++j) {
        // wp tail term a_j z^{2j}; (n-2)-th derivative: a_j (2j)!/(2j-n+2)! z^{2j-n+2}
        int deg = 2 * j - (n - 2);
        if (deg < 1 || deg > M) continue;
        double fall = 1.0;
        for (int i = 0; i < n - 2; ++i) fall *= (2 * j - i);
        double fact = 1.0;  // (n-1)!
        for (int i = 2; i <= n - 1; ++i) fact *= i;
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        if (static_cast<std::size_t>(j) < c.a.size())
          reg[static_cast<std::size_t>(n)][static_cast<std::size_t>(deg)] +=
              S(sign * fall / fact) * c.a[static_cast<std::size_t>(j)];
      }
    }
    return reg;
  };
  std::array<std::vector<std::vector<S>>, 2> reg = {f_regular(c1), f_regular(c2)};

  auto zero_series = [&] { return BasicSeries<S>(Var::q, N); };

  for (int which = 0; which < 2; ++which) {
    auto& a = sol.coeff[static_cast<std::size_t>(which)];
    auto& phi = sol.node[static_cast<std::size_t>(which)];
    for (int i = 0; i < 2; ++i) {
      a[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(nmax) + 1, zero_series());
      phi[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(M) + 1, zero_series());
      sol.lead[static_cast<std::size_t>(which)][static_cast<std::size_t>(i)] =
          (which == i) ? S(1.0) : S(0.0);
    }
    phi[static_cast<std::size_t>(which)][0] = BasicSeries<S>::constant(Var::q, N, S(1.0));

    for (int sweep = 0; sweep <= N + 2; ++sweep) {
      // polar matching: a_i[n] = -q^{n-1} phi_j[n-2]
      for (int i = 0; i < 2; ++i) {
        int j = 1 - i;
        for (int n = 2; n <= nmax; ++n)
          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] =
              -phi[static_cast<std::size_t>(j)][static_cast<std::size_t>(n - 2)].shifted(n - 1);
      }
      // node series: regular part of the global form on each side
      for (int i = 0; i < 2; ++i) {
        for (int k = 0; k <= M; ++k) {
          BasicSeries<S> acc = zero_series();
          if (k == 0 && which == i) acc = BasicSeries<S>::constant(Var::q, N, S(1.0));
          for (int n = 2; n <= nmax; ++n) {
            const S& rk = reg[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)]
                             [static_cast<std::size_t>(k)];
            if (scalar_norm(rk) == 0.0) continue;
            acc += rk * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)];
          }
          phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = acc;
        }
      }
    }
  }
  return sol;
}

/// Residual of the even glue relation: largest mismatched polar coefficient.
template <class S>
double even_glue_residual(const EvenBasisSolution<S>& sol) {
  double worst = 0.0;
  const int nmax = sol.N + 2;
  for (int which = 0; which < 2; ++which)
    for (int i = 0; i < 2; ++i) {
      int j = 1 - i;
      for (int n = 2; n <= nmax; ++n) {
        auto diff = sol.coeff[static_cast<std::size_t>(which)][static_cast<std::size_t>(i)]
                        [static_cast<std::size_t>(n)] +
                    sol.node[static_cast<std::size_t>(which)][static_cast<std::size_t>(j)]
                        [static_cast<std::size_t>(n - 2)]
                            .shifted(n - 1);
        worst = std::max(worst, diff.max_abs());
      }
    }
  return worst;
}

// ---------------------------------------------------------------------------
// Super (+,+) separating-node gluing: x1 x2 = -t^2, x1 th2 = t th1,
// x2 th1 = -t th2.  Node-chart functions live in the graded algebra over
// (eta1, eta2, theta); theta is the chart odd coordinate of whichever side
// the window belongs to.
// ---------------------------------------------------------------------------

using G2 = GrassmannElement<TruncatedSeries>;
using G3 = GrassmannElement<TruncatedSeries>;  // same type, theta generator added

inline G3 embed_theta_algebra(const G2& g) {
  G3 r{gens_eta2_theta()};
  if (!g.shaped()) return r;
  for (unsigned m = 0; m < g.n_terms(); ++m) r.set_term(m, g.term(m));  // masks align (theta is last)
  return r;
}
inline G2 restrict_theta_free(const G3& g) {
  G2 r{gens_eta2()};
  if (!g.shaped()) return r;
  unsigned theta_bit = 1u << 2;
  for (unsigned m = 0; m < g.n_terms(); ++m) {
    if (m & theta_bit) {
      if (!window_is_zero(g.term(m))) throw std::logic_error("restrict_theta_free: theta term present");
      continue;
    }
    r.set_term(m, g.term(m));
  }
  return r;
}
/// Split X = even + theta * part, returning `part` as a theta-free element.
inline G2 theta_part(const G3& g) {
  G2 r{gens_eta2()};
  if (!g.shaped()) return r;
  unsigned theta_bit = 1u << 2;
  for (unsigned m = 0; m < g.n_terms(); ++m) {
    if (!(m & theta_bit)) continue;
    unsigned m2 = m & ~theta_bit;
    // theta * e_{m2} = (-1)^{|m2|} e_{m2} theta
    auto v = g.term(m);
    if (std::popcount(m2) % 2 == 1) v = -v;
    r.set_term(m2, v);
  }
  return r;
}
inline G3 theta_even_part(const G3& g) {
  G3 r{gens_eta2_theta()};
  unsigned theta_bit = 1u << 2;
  for (unsigned m = 0; m < g.n_terms(); ++m)
    if (!(m & theta_bit)) r.set_term(m, g.term(m));
  return r;
}

struct PlusPlusInputs {
  const LaurentBasis* lb1;
  const LaurentBasis* lb2;
  int N;  // truncation in t
  int P() const { return N + 2; }
  int M() const { return N + 2; }
};

/// One global differential of the super glued family, stored as coefficients
/// on the regular bases of the two components plus the node-chart series.
struct SuperDifferential {
  int N = 0;
  std::array<G2, 2> lead;                 // delta(z_i) unit coefficient
  std::array<std::vector<G2>, 2> fcoef;   // on f_n(z_i) delta(z_i), n >= 2
  std::array<std::vector<G2>, 2> kcoef;   // on delta(kappa_n(z_i) nu_i), n >= 1
  std::array<LaurentWindow<G3>, 2> node;  // phi_i(x_i, theta_i), regular window
  G2 phi0;                                // s0-coefficient (zero for the basis)
};

namespace detail_glue {

inline TruncatedSeries ts_zero(int N) { return TruncatedSeries(Var::t, N); }
inline G2 g2_zero(int /*N*/) { return G2{gens_eta2()}; }
inline G3 g3_zero(int /*N*/) { return G3{gens_eta2_theta()}; }
inline G3 g3_one(int N) {
  return G3::scalar(gens_eta2_theta(), TruncatedSeries::constant(Var::t, N, 1.0));
}
inline G3 gen3(const char* name, int N) {
  return G3::generator(gens_eta2_theta(), name, TruncatedSeries::constant(Var::t, N, 1.0));
}

/// Shift the whole element by t^k.
inline G3 tshift(const G3& g, int k) {
  G3 r = g;
  for (unsigned m = 0; m < g.n_terms(); ++m) {
    auto b = g.term(m);
    if (!b.shaped()) continue;
    r.set_term(m, b.shifted(k));
  }
  return r;
}
inline G2 tshift2(const G2& g, int k) { return tshift(g, k); }

/// Substituted node term of the glue relation:
///   side 1:  +(t/x) phi2(-t^2/x, +t theta/x)
///   side 2:  -(t/x) phi1(-t^2/x, -t theta/x)
/// Input window in the other side's chart coordinate (regular degrees), the
/// result is a polar window in this side's coordinate.
inline LaurentWindow<G3> substituted_node_term(const LaurentWindow<G3>& phi_other, int side, int N,
                                               int out_lo, int out_hi) {
  LaurentWindow<G3> r(out_lo, out_hi);
  const int pref_sign = (side == 1) ? +1 : -1;
  for (int k = std::max(0, phi_other.lo()); k <= phi_other.hi(); ++k) {
    const G3& c = phi_other.coeff(k);
    if (window_is_zero(c)) continue;
    G3 even = theta_even_part(c);
    G2 th = theta_part(c);
    double par = (k % 2 == 0) ? 1.0 : -1.0;
    if (!window_is_zero(even)) {
      // (t/x) * even * (-1)^k t^{2k} x^{-k}
      if (2 * k + 1 <= N) r.add(-k - 1, tshift(static_cast<double>(pref_sign) * par * even, 2 * k + 1));
    }
    if (!window_is_zero(th)) {
      // theta-part: both sides give + theta * part * (-1)^k t^{2k+2} x^{-k-2}
      if (2 * k + 2 <= N) {
        G3 term = gen3("theta", N) * embed_theta_algebra(th);
        r.add(-k - 2, tshift(par * term, 2 * k + 2));
      }
    }
  }
  return r;
}

}  // namespace detail_glue

/// Laurent window (in the node chart coordinate x_i) of omega_i / s_i for a
/// stored differential: (theta + eta_i) C(x) + sum_j [kappa_j - eta_i theta
/// kappa_j'] alpha_j, with C = lead + sum_n fcoef_n f_n.
inline LaurentWindow<G3> omega_window(const SuperDifferential& d, const PlusPlusInputs& in, int comp) {
  using namespace detail_glue;
  const LaurentBasis& lb = comp == 0 ? *in.lb1 : *in.lb2;
  const int lo = -in.P(), hi = in.M();
  const int N = d.N;
  const char* eta_name = comp == 0 ? "eta1" : "eta2";
  G3 nu = gen3("theta", N) + gen3(eta_name, N);
  G3 eta_theta = gen3(eta_name, N) * gen3("theta", N);

  LaurentWindow<G3> w(lo, hi);
  const auto& fc = d.fcoef[static_cast<std::size_t>(comp)];
  const auto& kc = d.kcoef[static_cast<std::size_t>(comp)];
  for (int k = lo; k <= hi; ++k) {
    G3 cval;  // C(x) coefficient
    if (k == 0) cval += embed_theta_algebra(d.lead[static_cast<std::size_t>(comp)]);
    for (std::size_t n = 2; n < fc.size(); ++n) {
      cx f = lb.f(static_cast<int>(n)).coeff(k);
      if (scalar_norm(f) == 0.0) continue;
      cval += f * embed_theta_algebra(fc[n]);
    }
    G3 kval, kpval;
    for (std::size_t j = 1; j < kc.size(); ++j) {
      cx kcf = lb.kappa(static_cast<int>(j)).coeff(k);
      if (scalar_norm(kcf) != 0.0) kval += kcf * embed_theta_algebra(kc[j]);
      cx kp = lb.kappa(static_cast<int>(j)).derivative().coeff(k);
      if (scalar_norm(kp) != 0.0) kpval += kp * embed_theta_algebra(kc[j]);
    }
    G3 acc = nu * cval + kval - eta_theta * kpval;
    if (!window_is_zero(acc)) w.set(k, acc);
  }
  return w;
}

struct SuperBasisSolution {
  SuperDifferential omega[2];  // omega^(1), omega^(2)
  PlusPlusInputs inputs;
};

/// Iterative polar-matching solver for the unique basis with
/// omega^(k)_i = delta_{ki} delta(z_i) + higher glue corrections.
/// `alt_order` switches the within-sweep elimination order (used by the
/// uniqueness property test).
inline SuperBasisSolution solve_super_basis(const LaurentBasis& lb1, const LaurentBasis& lb2, int N,
                                            bool alt_order = false) {
  using namespace detail_glue;
  if (N < 1) throw std::invalid_argument("solve_super_basis: N >= 1");
  PlusPlusInputs in{&lb1, &lb2, N};
  const int P = in.P(), M = in.M();
  if (lb1.P() < P || lb1.M() < M || lb2.P() < P || lb2.M() < M)
    throw std::invalid_argument("solve_super_basis: laurent windows too small for N");

  SuperBasisSolution sol;
  sol.inputs = in;
  for (int which = 0; which < 2; ++which) {
    SuperDifferential& d = sol.omega[which];
    d.N = N;
    for (int i = 0; i < 2; ++i) {
      d.lead[static_cast<std::size_t>(i)] = G2::scalar(
          gens_eta2(), TruncatedSeries::constant(Var::t, N, which == i ? 1.0 : 0.0));
      d.fcoef[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(P) + 1, g2_zero(N));
      d.kcoef[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(P) + 1, g2_zero(N));
      d.node[static_cast<std::size_t>(i)] = LaurentWindow<G3>(0, M);
    }
    d.phi0 = g2_zero(N);
    // mod t^0 seed: phi_i = nu_i-part of the leading term
    d.node[static_cast<std::size_t>(which)].set(
        0, gen3("theta", N) + gen3(which == 0 ? "eta1" : "eta2", N));

    for (int sweep = 0; sweep <= N + 2; ++sweep) {
      for (int i = 0; i < 2; ++i) {
        int side = i + 1;
        const char* eta_name = i == 0 ? "eta1" : "eta2";
        G2 eta = G2::generator(gens_eta2(), eta_name, TruncatedSeries::constant(Var::t, N, 1.0));
        auto sub = substituted_node_term(d.node[static_cast<std::size_t>(1 - i)], side, N, -P, M);
        auto& fc = d.fcoef[static_cast<std::size_t>(i)];
        auto& kc = d.kcoef[static_cast<std::size_t>(i)];
        // theta x^{-1} coefficient must vanish (phi0 = 0 for the basis)
        for (int p = 1; p <= P; ++p) {
          G3 rp = sub.coeff(-p);
          G2 r_th = theta_part(rp);
          G2 r_ev = restrict_theta_free(theta_even_part(rp));
          if (!alt_order) {
            if (p >= 2) fc[static_cast<std::size_t>(p)] =
                r_th + static_cast<double>(p - 1) * (eta * kc[static_cast<std::size_t>(p - 1)]);
            kc[static_cast<std::size_t>(p)] = r_ev - eta * fc[static_cast<std::size_t>(p)];
          } else {
            kc[static_cast<std::size_t>(p)] = r_ev - eta * fc[static_cast<std::size_t>(p)];
            if (p >= 2) fc[static_cast<std::size_t>(p)] =
                r_th + static_cast<double>(p - 1) * (eta * kc[static_cast<std::size_t>(p - 1)]);
          }
        }
        // node series: regular part of the omega window (the substituted
        // term is purely polar)
        auto w = omega_window(d, in, i);
        LaurentWindow<G3> phi(0, M);
        for (int k = 0; k <= M; ++k) phi.set(k, w.coeff(k));
        d.node[static_cast<std::size_t>(i)] = phi;
      }
    }
  }
  return sol;
}

/// Largest violated polar coefficient of the glue relations.
inline double glue_residual(const SuperBasisSolution& sol) {
  double worst = 0.0;
  for (int which = 0; which < 2; ++which) {
    const auto& d = sol.omega[which];
    for (int i = 0; i < 2; ++i) {
      auto w = omega_window(d, sol.inputs, i);
      auto sub = detail_glue::substituted_node_term(d.node[static_cast<std::size_t>(1 - i)], i + 1,
                                                    d.N, -sol.inputs.P(), sol.inputs.M());
      auto diff = w - sub;
      worst = std::max(worst, diff.polar_part().max_abs());
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Odd sections of the (+,+) glued spin structure (reduced base, no etas).
// F_1 has the only pole (order 1) at the spin point of the pole component;
// the other side is regular.  Relations:
//   F_1(x1) = phi_1(x1) + (t/x1) phi_2(-t^2/x1)
//   F_2(x2) = phi_2(x2) - (t/x2) phi_1(-t^2/x2)
// ---------------------------------------------------------------------------

struct OddSectionSolution {
  int N = 0;
  int pole_component = 1;
  // kappa-basis coefficients per component (index n >= 1), t-series
  std::array<std::vector<TruncatedSeries>, 2> kcoef;
  // the normalized 1/kappa_1 coefficient on the pole side is exactly 1
  std::array<std::vector<TruncatedSeries>, 2> node;  // phi_i x-coefficients
};

inline OddSectionSolution solve_odd_section(const LaurentBasis& lb1, const LaurentBasis& lb2, int N,
                                            int pole_component = 1) {
  if (N < 1) throw std::invalid_argument("solve_odd_section: N >= 1");
  const int P = N + 2, M = N + 2;
  if (lb1.P() < P || lb1.M() < M || lb2.P() < P || lb2.M() < M)
    throw std::invalid_argument("solve_odd_section: windows too small");
  OddSectionSolution sol;
  sol.N = N;
  sol.pole_component = pole_component;
  auto zero = TruncatedSeries(Var::t, N);
  for (int i = 0; i < 2; ++i) {
    sol.kcoef[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(P) + 1, zero);
    sol.node[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(M) + 1, zero);
  }
  const LaurentBasis* lb[2] = {&lb1, &lb2};
  const int pc = pole_component - 1;

  for (int sweep = 0; sweep <= N + 2; ++sweep) {
    // polar matching
    for (int i = 0; i < 2; ++i) {
      int j = 1 - i;
      double side_sign = (i == 0) ? 1.0 : -1.0;
      for (int n = 1; n <= P; ++n) {
        // (t/x) phi_j(-t^2/x) polar coefficient at x^{-n}: k = n-1 term
        int k = n - 1;
        if (2 * k + 1 > N) {
          sol.kcoef[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] = zero;
          continue;
        }
        double par = (k % 2 == 0) ? 1.0 : -1.0;
        sol.kcoef[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] =
            side_sign * par *
            sol.node[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].shifted(2 * k + 1);
      }
    }
    // node series = regular part of F_i
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k <= M; ++k) {
        TruncatedSeries acc(Var::t, N);
        if (i == pc) {
          cx c = lb[i]->inv_kappa1().coeff(k);
          if (scalar_norm(c) != 0.0) acc += TruncatedSeries::constant(Var::t, N, c);
        }
        for (int n = 1; n <= P; ++n) {
          cx c = lb[i]->kappa(n).coeff(k);
          if (scalar_norm(c) == 0.0) continue;
          acc += c * sol.kcoef[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)];
        }
        sol.node[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = acc;
      }
    }
  }
  return sol;
}

/// Laurent window of F_i for an odd-section solution.
inline LaurentWindow<TruncatedSeries> odd_section_window(const OddSectionSolution& sol,
                                                         const LaurentBasis& lb, int comp) {
  const int P = sol.N + 2, M = sol.N + 2;
  LaurentWindow<TruncatedSeries> w(-P, M);
  for (int k = -P; k <= M; ++k) {
    TruncatedSeries acc(Var::t, sol.N);
    if (comp == sol.pole_component - 1) {
      cx c = lb.inv_kappa1().coeff(k);
      if (scalar_norm(c) != 0.0) acc += TruncatedSeries::constant(Var::t, sol.N, c);
    }
    for (int n = 1; n <= P; ++n) {
      cx c = lb.kappa(n).coeff(k);
      if (scalar_norm(c) == 0.0) continue;
      acc += c * sol.kcoef[static_cast<std::size_t>(comp)][static_cast<std::size_t>(n)];
    }
    if (!acc.is_zero()) w.set(k, acc);
  }
  return w;
}

inline double odd_section_residual(const OddSectionSolution& sol, const LaurentBasis& lb1,
                                   const LaurentBasis& lb2) {
  const int P = sol.N + 2;
  double worst = 0.0;
  const LaurentBasis* lb[2] = {&lb1, &lb2};
  for (int i = 0; i < 2; ++i) {
    int j = 1 - i;
    auto w = odd_section_window(sol, *lb[static_cast<std::size_t>(i)], i);
    for (int n = 1; n <= P; ++n) {
      TruncatedSeries sub(Var::t, sol.N);
      int k = n - 1;
      if (2 * k + 1 <= sol.N) {
        double par = (k % 2 == 0) ? 1.0 : -1.0;
        double side_sign = (i == 0) ? 1.0 : -1.0;
        sub = side_sign * par *
              sol.node[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].shifted(2 * k + 1);
      }
      worst = std::max(worst, (w.coeff(-n) - sub).max_abs());
    }
  }
  return worst;
}

// -- symmetry helpers for the property tests --------------------------------

/// The involution (t, eta1, eta2) -> (-t, -eta1, eta2) on a coefficient.
inline G2 z2_flip(const G2& g) {
  if (!g.shaped()) return g;
  G2 r{gens_eta2()};
  for (unsigned m = 0; m < g.n_terms(); ++m) {
    auto b = g.term(m);
    if (!b.shaped()) continue;
    TruncatedSeries nb(b.var(), b.order());
    for (int k = b.lo(); k <= b.order(); ++k) {
      cx v = b.coeff(k);
      if ((std::abs(k) % 2) == 1) v = -v;     // t -> -t
      if (m & 1u) v = -v;                     // eta1 -> -eta1
      if (scalar_norm(v) != 0.0) nb.set_coeff(k, v);
    }
    r.set_term(m, nb);
  }
  return r;
}

/// Even reduction: eta -> 0 and q = -t^2; maps the eta-free part of a
/// t-series coefficient to a q-series.
inline TruncatedSeries even_reduction(const G2& g, int Nq) {
  TruncatedSeries out(Var::q, Nq);
  if (!g.shaped()) return out;
  const auto& b = g.term(0);
  if (!b.shaped()) return out;
  for (int k = b.lo(); k <= b.order(); ++k) {
    cx v = b.coeff(k);
    if (scalar_norm(v) == 0.0) continue;
    if (k < 0 || k % 2 != 0) throw std::logic_error("even_reduction: odd or negative t-power");
    int m = k / 2;
    if (m > Nq) continue;
    // t^{2m} = (-q)^m
    out.set_coeff(m, out.coeff(m) + v * ((m % 2 == 0) ? 1.0 : -1.0));
  }
  return out;
}

}  // namespace superperiod
