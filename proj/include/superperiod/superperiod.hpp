#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "superperiod/gluing.hpp"

namespace superperiod {

// ---------------------------------------------------------------------------
// Cohomology projection and period matrices.
//
// The degenerating-family cohomology has the basis (e_1, f_1, e_2, f_2) with
// alpha/beta periods  int_{a_i} e_i = 1, int_{a_i} f_i = A_i,
// int_{b_i} e_i = tau_i, int_{b_i} f_i = 2 pi i + tau_i A_i.
// A differential projects by: delta(z_i)-part -> e_i, f_2-part -> f_i,
// odd-index f -> 0, even-index f_{2k} -> phi[2k] e_i, kappa-terms -> 0.
// ---------------------------------------------------------------------------

/// Projection of one solved even basis element onto (e_1, f_1, e_2, f_2).
template <class S>
struct EvenCohomologyClass {
  std::array<BasicSeries<S>, 2> e;  // e_i coefficients (q-series)
  std::array<BasicSeries<S>, 2> f;  // f_i coefficients
};

template <class S>
EvenCohomologyClass<S> even_cohomology_project(const EvenBasisSolution<S>& sol, int which,
                                               const EvenComponentData<S>& c1,
                                               const EvenComponentData<S>& c2) {
  const EvenComponentData<S>* cd[2] = {&c1, &c2};
  EvenCohomologyClass<S> cls;
  for (int i = 0; i < 2; ++i) {
    BasicSeries<S> e = BasicSeries<S>::constant(Var::q, sol.N,
                                                sol.lead[static_cast<std::size_t>(which)]
                                                        [static_cast<std::size_t>(i)]);
    const auto& coef = sol.coeff[static_cast<std::size_t>(which)][static_cast<std::size_t>(i)];
    for (std::size_t n = 4; n < coef.size(); n += 2) {
      const S& phi = cd[i]->phi2k.at(n / 2);
      if (scalar_norm(phi) == 0.0) continue;
      e += phi * coef[n];
    }
    cls.e[static_cast<std::size_t>(i)] = e;
    cls.f[static_cast<std::size_t>(i)] = coef.at(2);
  }
  return cls;
}

template <class S>
struct EvenPeriodMatrix {
  std::array<std::array<BasicSeries<S>, 2>, 2> omega;  // Omega_{ij}, q-series
  std::array<std::array<BasicSeries<S>, 2>, 2> alpha;  // alpha-period matrix (phi + psi A)
  std::array<std::array<BasicSeries<S>, 2>, 2> norm;   // transition matrix to the normalized basis
};

/// Periods of the solved even basis: normalize alpha-periods, return the
/// beta-period matrix Omega_{ij} = tau_i delta_{ij} + 2 pi i (M psi)_{ji}.
template <class S>
EvenPeriodMatrix<S> even_period_matrix(const EvenBasisSolution<S>& sol, const S& tau1, const S& tau2,
                                       const EvenComponentData<S>& c1,
                                       const EvenComponentData<S>& c2) {
  EvenCohomologyClass<S> cls[2] = {even_cohomology_project(sol, 0, c1, c2),
                                   even_cohomology_project(sol, 1, c1, c2)};
  const S A[2] = {c1.A, c2.A};
  // P[k][i] = int_{alpha_i} omega^{(k+1)} = phi_{ki} + A_i psi_{ki}
  std::array<std::array<BasicSeries<S>, 2>, 2> P;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      P[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
          cls[k].e[static_cast<std::size_t>(i)] + A[i] * cls[k].f[static_cast<std::size_t>(i)];
  // M = P^{-1} (2x2 series inverse via adjugate)
  auto det = P[0][0] * P[1][1] - P[0][1] * P[1][0];
  auto dinv = det.inverse();
  std::array<std::array<BasicSeries<S>, 2>, 2> M;
  M[0][0] = P[1][1] * dinv;
  M[1][1] = P[0][0] * dinv;
  M[0][1] = -P[0][1] * dinv;
  M[1][0] = -P[1][0] * dinv;

  EvenPeriodMatrix<S> pm;
  pm.alpha = P;
  pm.norm = M;
  const S tau[2] = {tau1, tau2};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      BasicSeries<S> acc(Var::q, sol.N);
      for (int k = 0; k < 2; ++k)
        acc += M[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
               cls[k].f[static_cast<std::size_t>(i)];
      acc = S(kTwoPiI) * acc;
      if (i == j) acc += BasicSeries<S>::constant(Var::q, sol.N, tau[i]);
      pm.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
    }
  return pm;
}

// -- super flavor ------------------------------------------------------------

struct SuperCohomologyClass {
  std::array<G2, 2> e;
  std::array<G2, 2> f;
};

inline SuperCohomologyClass cohomology_project(const SuperDifferential& d, const LaurentBasis& lb1,
                                               const LaurentBasis& lb2) {
  const LaurentBasis* lb[2] = {&lb1, &lb2};
  SuperCohomologyClass cls;
  for (int i = 0; i < 2; ++i) {
    G2 e = d.lead[static_cast<std::size_t>(i)];
    const auto& fc = d.fcoef[static_cast<std::size_t>(i)];
    for (std::size_t n = 4; n < fc.size(); n += 2) {
      cx phi = lb[i]->phi(static_cast<int>(n));
      if (scalar_norm(phi) == 0.0) continue;
      e += phi * fc[n];
    }
    cls.e[static_cast<std::size_t>(i)] = e;
    cls.f[static_cast<std::size_t>(i)] = fc.at(2);
  }
  return cls;
}

struct SuperPeriodMatrix {
  int N = 0;
  std::array<std::array<G2, 2>, 2> omega;  // symmetric 2x2 of eta-algebra series
  std::array<std::array<G2, 2>, 2> alpha;  // alpha-period matrix
  std::array<std::array<G2, 2>, 2> norm;   // normalization transition matrix

  /// Even part (eta-free) and the eta1 eta2 component of an entry.
  TruncatedSeries even_part(int i, int j) const {
    return omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].term(0);
  }
  TruncatedSeries eta_part(int i, int j) const {
    return omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].term(3);
  }
};

inline SuperPeriodMatrix period_matrix(const SuperBasisSolution& sol) {
  const LaurentBasis& lb1 = *sol.inputs.lb1;
  const LaurentBasis& lb2 = *sol.inputs.lb2;
  const int N = sol.omega[0].N;
  SuperCohomologyClass cls[2] = {cohomology_project(sol.omega[0], lb1, lb2),
                                 cohomology_project(sol.omega[1], lb1, lb2)};
  const cx A[2] = {lb1.ctx().A(), lb2.ctx().A()};
  GMatrix<TruncatedSeries> P(2, 2);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      P.at(k, i) = cls[k].e[static_cast<std::size_t>(i)] + A[i] * cls[k].f[static_cast<std::size_t>(i)];
  GMatrix<TruncatedSeries> M;
  try {
    M = inverse_even(P);
  } catch (const std::domain_error&) {
    throw std::domain_error("period_matrix: degenerate alpha-period matrix");
  }
  SuperPeriodMatrix pm;
  pm.N = N;
  const cx tau[2] = {lb1.ctx().tau(), lb2.ctx().tau()};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      pm.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = P.at(i, j);
      pm.norm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = M.at(i, j);
      G2 acc{gens_eta2()};
      for (int k = 0; k < 2; ++k) acc += M.at(j, k) * cls[k].f[static_cast<std::size_t>(i)];
      acc = kTwoPiI * acc;
      if (i == j)
        acc += G2::scalar(gens_eta2(), TruncatedSeries::constant(Var::t, N, tau[i]));
      pm.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
    }
  return pm;
}

// ---------------------------------------------------------------------------
// Canonical projection pullback: find t' = t + f eta1 eta2,
// tau_i' = tau_i + g_i eta1 eta2 with Omega_even(t', tau') = Omega_super.
// The jet-valued even pipeline supplies exact d/dtau coefficients.
// ---------------------------------------------------------------------------

struct CanonicalPullback {
  TruncatedSeries f;   // eta1 eta2 correction of t
  TruncatedSeries g1;  // of tau1
  TruncatedSeries g2;  // of tau2
  double residual = 0.0;  // substitution-check residual
};

/// Convert a q-series to a t-series via q = -t^2.
inline TruncatedSeries q_to_t(const TruncatedSeries& s, int Nt) {
  return s.substitute_monomial(Var::t, Nt, cx(-1.0), 2);
}

inline CanonicalPullback canonical_projection_pullback(const SuperPeriodMatrix& super,
                                                       const EvenPeriodMatrix<Jet3>& even_jets) {
  const int Nt = super.N;
  struct Entry {
    TruncatedSeries dt, dtau1, dtau2, rhs;
  };
  std::array<Entry, 3> sys;  // equations for (1,1), (2,2), (1,2)
  const std::array<std::pair<int, int>, 3> idx = {{{0, 0}, {1, 1}, {0, 1}}};
  for (int r = 0; r < 3; ++r) {
    auto [i, j] = idx[static_cast<std::size_t>(r)];
    const auto& om = even_jets.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    // d/dt of Omega(q(t)) with q = -t^2: chain rule through the q-series
    TruncatedSeries omt = q_to_t(jet_values(om), Nt);
    sys[static_cast<std::size_t>(r)].dt = omt.derivative();
    sys[static_cast<std::size_t>(r)].dtau1 = q_to_t(jet_dtau(om, 1), Nt);
    sys[static_cast<std::size_t>(r)].dtau2 = q_to_t(jet_dtau(om, 2), Nt);
    sys[static_cast<std::size_t>(r)].rhs = super.eta_part(i, j);
  }
  // Solve the 3x3 series system; the t-equation column is ~ 4 pi i t for the
  // off-diagonal entry, so eliminate with Laurent division and check that no
  // principal part survives.
  // Order unknowns (g1, g2, f); eliminate g1 from eq (1,1), g2 from eq (2,2).
  auto& e11 = sys[0];
  auto& e22 = sys[1];
  auto& e12 = sys[2];
  auto g1_of = [&](const TruncatedSeries& f, const TruncatedSeries& g2) {
    return (e11.rhs - e11.dt * f - e11.dtau2 * g2) * e11.dtau1.inverse();
  };
  auto g2_of = [&](const TruncatedSeries& f, const TruncatedSeries& g1) {
    return (e22.rhs - e22.dt * f - e22.dtau1 * g1) * e22.dtau2.inverse();
  };
  TruncatedSeries f(Var::t, Nt), g1(Var::t, Nt), g2(Var::t, Nt);
  // Gauss-Seidel in triangular order; the couplings are O(t^3) so this
  // converges within a few rounds.
  for (int round = 0; round < Nt + 2; ++round) {
    auto dtinv = e12.dt.inverse();  // Laurent in t, leading 1/(4 pi i t)
    f = (e12.rhs - e12.dtau1 * g1 - e12.dtau2 * g2) * dtinv;
    // spurious principal part would signal an inconsistent system
    for (int k = f.lo(); k < 0; ++k)
      if (std::abs(f.coeff(k)) > 1e-9)
        throw std::domain_error("canonical pullback: singular system beyond t=0");
    TruncatedSeries fr(Var::t, Nt);
    for (int k = 0; k <= Nt; ++k) fr.set_coeff(k, f.coeff(k));
    f = fr;
    g1 = g1_of(f, g2);
    g2 = g2_of(f, g1);
  }
  CanonicalPullback out{f, g1, g2, 0.0};
  // substitution check: J * (f,g1,g2) == rhs; the top two orders are not
  // determined (the f-equation divides by ~t), so check below them
  for (int r = 0; r < 3; ++r) {
    auto& e = sys[static_cast<std::size_t>(r)];
    auto resid = e.dt * f + e.dtau1 * g1 + e.dtau2 * g2 - e.rhs;
    for (int k = resid.lo(); k <= Nt - 2; ++k)
      out.residual = std::max(out.residual, std::abs(resid.coeff(k)));
  }
  return out;
}

}  // namespace superperiod
