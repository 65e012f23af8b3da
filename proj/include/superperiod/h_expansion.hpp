#pragma once

#include <array>

#include "superperiod/bi_series.hpp"
#include "superperiod/superperiod.hpp"

namespace superperiod {

using G4B = GrassmannElement<BiSeries>;

/// Entrywise complex conjugation of all series coefficients; running the
/// period pipeline at conj(tau) and conjugating yields the second-sector
/// (holomorphically independent) period data with conjugated structure
/// constants.
inline TruncatedSeries conjugate_coefficients(const TruncatedSeries& s) {
  if (!s.shaped()) return s;
  TruncatedSeries r(s.var(), s.order());
  for (int k = s.lo(); k <= s.order(); ++k) {
    cx v = s.coeff(k);
    if (scalar_norm(v) != 0.0) r.set_coeff(k, std::conj(v));
  }
  return r;
}
inline G2 conjugate_coefficients(const G2& g) {
  if (!g.shaped()) return g;
  G2 r{g.generators()};
  for (unsigned m = 0; m < g.n_terms(); ++m) r.set_term(m, conjugate_coefficients(g.term(m)));
  return r;
}
inline SuperPeriodMatrix conjugate_coefficients(const SuperPeriodMatrix& pm) {
  SuperPeriodMatrix r = pm;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      r.omega[i][j] = conjugate_coefficients(pm.omega[i][j]);
      r.alpha[i][j] = conjugate_coefficients(pm.alpha[i][j]);
      r.norm[i][j] = conjugate_coefficients(pm.norm[i][j]);
    }
  return r;
}

/// The canonical two-sector pairing h = det(Om~ - Om)^{-1} det(M) det(M~),
/// expanded on the four-generator algebra (eta1, eta2, etat1, etat2) over
/// bivariate (t, t~) series, together with the ingredient decomposition used
/// by the printed component formulas.
struct HExpansion {
  // direct components of h
  BiSeries h0, h1, ht1, h11;
  // ingredients
  BiSeries d;                    // det(Om~0 - Om0)
  BiSeries a, at, b;             // pairing values: <X,Om~1> = t~ a, <X,Om1> = -t at, <Om~1,Om1> = t t~ b
  BiSeries m0, mt0, m1, mt1;     // det(M) = m0 + m1 t^3 eta1 eta2 and the tilde copy
  // component-formula route (for the coefficient-wise cross-check)
  BiSeries h0_f, h1_f, ht1_f, h11_f;
};

namespace detail_h {
inline G4B embed4(const G2& g, int sector, int nt, int ntt) {
  G4B r{gens_eta4()};
  if (!g.shaped()) return r;
  for (unsigned m = 0; m < g.n_terms(); ++m) {
    const auto& b = g.term(m);
    if (!b.shaped() || b.is_zero()) continue;
    unsigned mask = (sector == 1) ? m : (m << 2);
    r.set_term(mask, embed_sector(b, sector, nt, ntt));
  }
  return r;
}
using Mat2 = std::array<std::array<BiSeries, 2>, 2>;
inline BiSeries det2(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
inline BiSeries pair2(const Mat2& x, const Mat2& y) {
  return x[0][0] * y[1][1] + x[1][1] * y[0][0] - x[0][1] * y[1][0] - x[1][0] * y[0][1];
}
}  // namespace detail_h

/// pm: first-sector periods (series in t); pmc: the second-sector periods,
/// i.e. conjugate_coefficients(period pipeline at conj(tau~)).
inline HExpansion h_expansion(const SuperPeriodMatrix& pm, const SuperPeriodMatrix& pmc, int nt,
                              int ntt) {
  using namespace detail_h;
  HExpansion h;

  // direct four-generator computation
  GMatrix<BiSeries> diff(2, 2), m1m(2, 2), m2m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      diff.at(i, j) = embed4(pmc.omega[i][j], 2, nt, ntt) - embed4(pm.omega[i][j], 1, nt, ntt);
      m1m.at(i, j) = embed4(pm.norm[i][j], 1, nt, ntt);
      m2m.at(i, j) = embed4(pmc.norm[i][j], 2, nt, ntt);
    }
  auto det_diff = det_even(diff);
  if (body_zero(det_diff.term(0)) || scalar_norm(det_diff.term(0).eval00()) == 0.0)
    throw std::domain_error("h_expansion: sector collision (tau~ == tau)");
  auto hfull = det_diff.inverse() * det_even(m1m) * det_even(m2m);
  h.h0 = hfull.term(0b0000);
  h.h1 = hfull.term(0b0011);
  h.ht1 = hfull.term(0b1100);
  h.h11 = hfull.term(0b1111);

  // ingredient route per the printed formulas
  Mat2 X, Om1, Omt1;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      X[i][j] = embed_sector(pmc.even_part(i, j), 2, nt, ntt) -
                embed_sector(pm.even_part(i, j), 1, nt, ntt);
      Om1[i][j] = embed_sector(pm.eta_part(i, j), 1, nt, ntt);
      Omt1[i][j] = embed_sector(pmc.eta_part(i, j), 2, nt, ntt);
    }
  h.d = det2(X);
  h.a = pair2(X, Omt1).shifted(0, -1);       // <X, Om~1> = t~ a
  h.at = (-pair2(X, Om1)).shifted(-1, 0);    // <X, Om1> = -t at
  h.b = pair2(Omt1, Om1).shifted(-1, -1);    // <Om~1, Om1> = t t~ b

  h.m0 = embed_sector(pm.norm[0][0].term(0), 1, nt, ntt) * embed_sector(pm.norm[1][1].term(0), 1, nt, ntt) -
         embed_sector(pm.norm[0][1].term(0), 1, nt, ntt) * embed_sector(pm.norm[1][0].term(0), 1, nt, ntt);
  h.mt0 = embed_sector(pmc.norm[0][0].term(0), 2, nt, ntt) * embed_sector(pmc.norm[1][1].term(0), 2, nt, ntt) -
          embed_sector(pmc.norm[0][1].term(0), 2, nt, ntt) * embed_sector(pmc.norm[1][0].term(0), 2, nt, ntt);
  // eta1 eta2-part of det(M) = m1 t^3
  auto detM1 = det_even(m1m).term(0b0011);
  auto detM2 = det_even(m2m).term(0b1100);
  h.m1 = detM1.shifted(-3, 0);
  h.mt1 = detM2.shifted(0, -3);

  auto dinv = h.d.inverse();
  auto d2 = dinv * dinv;
  auto d3 = d2 * dinv;
  auto t1 = BiSeries::constant(nt, ntt, 1.0).shifted(1, 0);
  auto tt1 = BiSeries::constant(nt, ntt, 1.0).shifted(0, 1);
  h.h0_f = dinv * h.m0 * h.mt0;
  h.h1_f = -d2 * h.at * h.m0 * h.mt0 * t1 + dinv * h.m1 * h.mt0 * t1 * t1 * t1;
  h.ht1_f = -d2 * h.a * h.m0 * h.mt0 * tt1 + dinv * h.mt1 * h.m0 * tt1 * tt1 * tt1;
  h.h11_f = (t1 * tt1) *
            ((d2 * h.b + 2.0 * d3 * h.a * h.at) * h.m0 * h.mt0 -
             d2 * h.at * h.m0 * h.mt1 * tt1 * tt1 - d2 * h.a * h.mt0 * h.m1 * t1 * t1 +
             dinv * h.m1 * h.mt1 * t1 * t1 * tt1 * tt1);
  return h;
}

/// Everything the two-sector measure work needs for one (tau1, tau2,
/// tau1~, tau2~) configuration at truncation N per sector.
struct TwoSectorPeriods {
  SuperPeriodMatrix pm;   // first sector, series in t
  SuperPeriodMatrix pmc;  // second sector (conjugated constants), series in t~
};

/// Build the (+,+) period pipeline for one sector.  For the conjugate
/// sector pass sector_conjugate = true and the tilde parameters; those live
/// in the lower half-plane (the conjugate of an upper half-plane modulus).
inline SuperPeriodMatrix plus_plus_periods(cx tau1, cx tau2, int N, bool sector_conjugate = false,
                                           int q_terms = 64) {
  cx t1 = sector_conjugate ? std::conj(tau1) : tau1;
  cx t2 = sector_conjugate ? std::conj(tau2) : tau2;
  EllipticContext c1(t1, q_terms), c2(t2, q_terms);
  LaurentBasis lb1(c1, 0, N + 2, N + 2), lb2(c2, 0, N + 2, N + 2);
  auto sol = solve_super_basis(lb1, lb2, N);
  auto pm = period_matrix(sol);
  if (sector_conjugate) pm = conjugate_coefficients(pm);
  return pm;
}

}  // namespace superperiod
