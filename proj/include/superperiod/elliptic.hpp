#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "superperiod/jet.hpp"
#include "superperiod/laurent.hpp"
#include "superperiod/truncated_series.hpp"

namespace superperiod {

/// E_2(q) = 1 - 24 sum n q^n/(1-q^n); E_4, E_6 with the usual weights.
inline cx eisenstein_E2(cx q, int terms = 64) {
  if (std::abs(q) >= 1.0) throw std::domain_error("eisenstein: |q| must be < 1");
  cx acc = 0.0, qn = 1.0;
  for (int n = 1; n <= terms; ++n) {
    qn *= q;
    acc += static_cast<double>(n) * qn / (1.0 - qn);
  }
  return 1.0 - 24.0 * acc;
}
inline cx eisenstein_E4(cx q, int terms = 64) {
  if (std::abs(q) >= 1.0) throw std::domain_error("eisenstein: |q| must be < 1");
  cx acc = 0.0, qn = 1.0;
  for (int n = 1; n <= terms; ++n) {
    qn *= q;
    acc += std::pow(static_cast<double>(n), 3) * qn / (1.0 - qn);
  }
  return 1.0 + 240.0 * acc;
}
inline cx eisenstein_E6(cx q, int terms = 64) {
  if (std::abs(q) >= 1.0) throw std::domain_error("eisenstein: |q| must be < 1");
  cx acc = 0.0, qn = 1.0;
  for (int n = 1; n <= terms; ++n) {
    qn *= q;
    acc += std::pow(static_cast<double>(n), 5) * qn / (1.0 - qn);
  }
  return 1.0 - 504.0 * acc;
}

/// Weierstrass data for the lattice Z + Z tau, evaluated through q-series
/// with argument reduction into the fundamental cell.
class EllipticContext {
 public:
  explicit EllipticContext(cx tau, int q_terms = 64) : tau_(tau), q_terms_(q_terms) {
    if (tau.imag() <= 0.0) throw std::domain_error("elliptic context: Im tau must be > 0");
    q_ = std::exp(kTwoPiI * tau);
    E2_ = eisenstein_E2(q_, q_terms_);
    E4_ = eisenstein_E4(q_, q_terms_);
    E6_ = eisenstein_E6(q_, q_terms_);
    g2_ = 4.0 * std::pow(kPi, 4) / 3.0 * E4_;
    g3_ = 8.0 * std::pow(kPi, 6) / 27.0 * E6_;
    A_ = kTwoPiI * kTwoPiI / 12.0 * E2_;
    eta1_ = -A_;
    eta2_ = 2.0 * zeta_raw(tau / 2.0);
    e_[0] = wp_raw(cx(0.5, 0.0));
    e_[1] = wp_raw(tau / 2.0);
    e_[2] = wp_raw((tau + 1.0) / 2.0);
  }

  cx tau() const { return tau_; }
  cx q() const { return q_; }
  int q_terms() const { return q_terms_; }
  cx E2() const { return E2_; }
  cx g2() const { return g2_; }
  cx g3() const { return g3_; }
  /// A(tau) = (2 pi i)^2 E_2 / 12, the alpha-period of the ((z) basis form.
  cx A() const { return A_; }
  cx eta1_quasi() const { return eta1_; }
  cx eta2_quasi() const { return eta2_; }
  cx e(int i) const { return e_.at(static_cast<std::size_t>(i)); }
  cx half_period(int i) const {
    switch (i) {
      case 0: return cx(0.5, 0.0);
      case 1: return tau_ / 2.0;
      case 2: return (tau_ + 1.0) / 2.0;
    }
    throw std::out_of_range("half_period index");
  }
  cx lambda_modular() const { return (e_[2] - e_[1]) / (e_[0] - e_[1]); }

  // -- point evaluation ----------------------------------------------------

  cx wp(cx z) const {
    auto [zr, m, n] = reduce(z);
    (void)m;
    (void)n;
    return wp_raw(zr);
  }
  cx wp_prime(cx z) const {
    auto [zr, m, n] = reduce(z);
    (void)m;
    (void)n;
    return wp_prime_raw(zr);
  }
  cx zeta(cx z) const {
    auto [zr, m, n] = reduce(z);
    return zeta_raw(zr) + static_cast<double>(m) * eta1_ + static_cast<double>(n) * eta2_;
  }
  /// zeta_1(z) = -(2 pi i)^{-1} (zeta(z) - eta1 z); periodic in z -> z+1.
  cx zeta1(cx z) const { return -(zeta(z) - eta1_ * z) / kTwoPiI; }
  /// h_u(z) = zeta(z) - zeta(z-u) - zeta(u).
  cx h_u(cx u, cx z) const { return zeta(z) - zeta(z - u) - zeta(u); }

  /// Partial d/dtau of wp at fixed z (argument reduction accounted for).
  cx wp_tau_derivative(cx z) const {
    auto [zr, m, n] = reduce(z);
    (void)m;
    cx corr = (n == 0) ? cx(0.0) : -static_cast<double>(n) * wp_prime_raw(zr);
    return wp_tau_raw(zr) + corr;
  }
  /// Total d/dtau of e_i(tau) = wp(half_period_i(tau), tau).
  cx e_tau_derivative(int i) const {
    // wp' vanishes at half-periods, so the moving-point term drops out.
    return wp_tau_derivative(half_period(i));
  }
  cx lambda_tau_derivative() const {
    cx d1 = e_tau_derivative(0), d2 = e_tau_derivative(1), d3 = e_tau_derivative(2);
    cx num = (d3 - d2) * (e_[0] - e_[1]) - (e_[2] - e_[1]) * (d1 - d2);
    return num / ((e_[0] - e_[1]) * (e_[0] - e_[1]));
  }

  /// Taylor coefficients T_k = wp^{(k)}(u)/k! around a non-lattice point u,
  /// from wp'' = 6 wp^2 - g2/2 seeded by (wp(u), wp'(u)).
  std::vector<cx> wp_taylor_at(cx u, int kmax) const {
    std::vector<cx> T(static_cast<std::size_t>(kmax) + 1);
    T[0] = wp(u);
    if (kmax >= 1) T[1] = wp_prime(u);
    for (int k = 0; k + 2 <= kmax; ++k) {
      cx conv = 0.0;
      for (int m = 0; m <= k; ++m) conv += T[static_cast<std::size_t>(m)] * T[static_cast<std::size_t>(k - m)];
      cx rhs = 6.0 * conv - (k == 0 ? g2_ / 2.0 : cx(0.0));
      T[static_cast<std::size_t>(k + 2)] = rhs / static_cast<double>((k + 1) * (k + 2));
    }
    return T;
  }

 private:
  friend class LaurentBasis;
  friend struct NodalLimit;

  std::tuple<cx, int, int> reduce(cx z) const {
    double b = z.imag() / tau_.imag();
    double a = z.real() - b * tau_.real();
    int m = static_cast<int>(std::floor(a + 0.5));
    int n = static_cast<int>(std::floor(b + 0.5));
    cx zr = z - static_cast<double>(m) - static_cast<double>(n) * tau_;
    if (std::abs(zr) < 1e-12 * std::max(1.0, std::abs(tau_)))
      throw std::domain_error("elliptic evaluation at a lattice point");
    return {zr, m, n};
  }

  // Band-series kernels; valid for z with |Im z / Im tau| <= 1/2 + eps.
  cx wp_raw(cx z) const {
    cx u = std::exp(kTwoPiI * z);
    cx acc = 1.0 / 12.0 + u / ((1.0 - u) * (1.0 - u));
    cx qn = 1.0;
    for (int n = 1; n <= q_terms_; ++n) {
      qn *= q_;
      cx a = qn * u, b = qn / u;
      acc += a / ((1.0 - a) * (1.0 - a)) + b / ((1.0 - b) * (1.0 - b)) -
             2.0 * qn / ((1.0 - qn) * (1.0 - qn));
    }
    return kTwoPiI * kTwoPiI * acc;
  }
  static cx dW(cx w) { return w * (1.0 + w) / std::pow(1.0 - w, 3); }
  cx wp_prime_raw(cx z) const {
    cx u = std::exp(kTwoPiI * z);
    cx acc = dW(u);
    cx qn = 1.0;
    for (int n = 1; n <= q_terms_; ++n) {
      qn *= q_;
      acc += dW(qn * u) - dW(qn / u);
    }
    return kTwoPiI * kTwoPiI * kTwoPiI * acc;
  }
  cx wp_tau_raw(cx z) const {
    cx u = std::exp(kTwoPiI * z);
    cx acc = 0.0, qn = 1.0;
    for (int n = 1; n <= q_terms_; ++n) {
      qn *= q_;
      acc += static_cast<double>(n) * (dW(qn * u) + dW(qn / u) - 2.0 * dW(qn));
    }
    return kTwoPiI * kTwoPiI * kTwoPiI * acc;
  }
  cx zeta_raw(cx z) const {
    cx u = std::exp(kTwoPiI * z);
    cx acc = kPi * cx(0, 1) * (u + 1.0) / (u - 1.0);
    cx qn = 1.0;
    for (int n = 1; n <= q_terms_; ++n) {
      qn *= q_;
      acc += kTwoPiI * ((qn / u) / (1.0 - qn / u) - qn * u / (1.0 - qn * u));
    }
    return eta1_ * z + acc;
  }

  cx tau_, q_;
  int q_terms_;
  cx E2_, E4_, E6_, g2_, g3_, A_, eta1_, eta2_;
  std::array<cx, 3> e_;
};

/// q -> 0 limits on the nodal cubic, u = exp(2 pi i z); independent test
/// oracles for the degenerating family.
struct NodalLimit {
  static cx wp0(cx u) { return std::pow(kPi * cx(0, 1), 2) * (4.0 * u / ((1.0 - u) * (1.0 - u)) + 1.0 / 3.0); }
  static cx wp0_prime(cx u) { return std::pow(kPi * cx(0, 1), 3) * 8.0 * u * (1.0 + u) / std::pow(1.0 - u, 3); }
  static cx h_half0(cx u) { return kPi * cx(0, 1) * 4.0 * u / (u * u - 1.0); }
  static cx kappa1_0(cx u) { return kPi * cx(0, 1) * (u + 1.0) / (u - 1.0); }
};

/// Laurent coefficients of wp around z = 0: wp = z^-2 + sum_j a_j z^{2j},
/// via the classical quadratic recursion seeded by g2, g3.  Works over
/// plain complex values or jets.
template <class S>
std::vector<S> wp_laurent_coeffs(const S& g2, const S& g3, int jmax) {
  std::vector<S> a(static_cast<std::size_t>(jmax) + 1);
  if (jmax >= 1) a[1] = g2 / S(20.0);
  if (jmax >= 2) a[2] = g3 / S(28.0);
  for (int j = 3; j <= jmax; ++j) {
    S acc{};
    for (int m = 1; m <= j - 2; ++m) acc += a[static_cast<std::size_t>(m)] * a[static_cast<std::size_t>(j - 1 - m)];
    a[static_cast<std::size_t>(j)] = S(3.0) * acc / S(static_cast<double>((2 * j + 3) * (j - 2)));
  }
  return a;
}

/// Laurent windows around the puncture for the gluing bases: wp and its
/// relatives, the pole-normalized functions f_n, and the spin-twisted basis
/// kappa_n for the chosen half-period.
class LaurentBasis {
 public:
  LaurentBasis(const EllipticContext& ctx, int spin, int P, int M)
      : ctx_(&ctx), spin_(spin), P_(P), M_(M) {
    const int jmax = (P + M) / 2 + 3;
    a_ = wp_laurent_coeffs<cx>(ctx.g2(), ctx.g3(), jmax);
    eu_ = ctx.e(spin);
    T_ = ctx.wp_taylor_at(ctx.half_period(spin), P + M + 4);

    wp_ = LaurentWindow<cx>(-P - 2, M + 2);
    wp_.set(-2, 1.0);
    for (int j = 1; 2 * j <= wp_.hi(); ++j) wp_.set(2 * j, a_[static_cast<std::size_t>(j)]);
    wp_prime_ = wp_.derivative();

    zeta_ = LaurentWindow<cx>(-P - 2, M + 2);
    zeta_.set(-1, 1.0);
    for (int j = 1; 2 * j + 1 <= zeta_.hi(); ++j)
      zeta_.set(2 * j + 1, -a_[static_cast<std::size_t>(j)] / static_cast<double>(2 * j + 1));
    zeta1_ = LaurentWindow<cx>(-P - 2, M + 2);
    for (int k = zeta1_.lo(); k <= zeta1_.hi(); ++k) {
      cx v = zeta_.coeff(k);
      if (k == 1) v -= ctx.eta1_quasi();
      zeta1_.set(k, -v / kTwoPiI);
    }

    // h_u = 1/z + sum_{j>=0} (T_{2j} - a_j) z^{2j+1} / (2j+1)   (a_0 := 0)
    h_u_ = LaurentWindow<cx>(-P - 2, M + 2);
    h_u_.set(-1, 1.0);
    for (int j = 0; 2 * j + 1 <= h_u_.hi(); ++j) {
      cx aj = (j == 0) ? cx(0.0) : a_[static_cast<std::size_t>(j)];
      h_u_.set(2 * j + 1, (T_[static_cast<std::size_t>(2 * j)] - aj) / static_cast<double>(2 * j + 1));
    }

    build_f();
    build_kappa();
  }

  const EllipticContext& ctx() const { return *ctx_; }
  int spin() const { return spin_; }
  int P() const { return P_; }
  int M() const { return M_; }
  cx e_u() const { return eu_; }

  const LaurentWindow<cx>& wp_window() const { return wp_; }
  const LaurentWindow<cx>& wp_prime_window() const { return wp_prime_; }
  const LaurentWindow<cx>& zeta1_window() const { return zeta1_; }
  const LaurentWindow<cx>& h_u_window() const { return h_u_; }
  const std::vector<cx>& wp_taylor0() const { return a_; }
  /// wp^{(k)}(u)/k! at the spin half-period.
  const std::vector<cx>& wp_taylor_u() const { return T_; }

  /// f_n, n >= 2: f_n = z^{-n} + O(z), built from wp-derivative windows with
  /// the constant term removed; f_1 is h_u, f_0 = 1.
  const LaurentWindow<cx>& f(int n) const {
    if (n < 0 || n > P_ + 1) throw std::out_of_range("f_n outside window");
    return f_.at(static_cast<std::size_t>(n));
  }
  /// kappa_n = z^{-n} + O(1), sections of the spin line bundle.
  const LaurentWindow<cx>& kappa(int n) const {
    if (n < 1 || n > P_ + 1) throw std::out_of_range("kappa_n outside window");
    return kappa_.at(static_cast<std::size_t>(n));
  }
  const LaurentWindow<cx>& inv_kappa1() const { return inv_kappa1_; }

  /// Cohomology constant phi[2k]: minus the constant Laurent coefficient of
  /// wp^{(2k-2)}/(2k-1)!; f_2k = wp^{(2k-2)}/(2k-1)! + phi[2k].
  cx phi(int two_k) const {
    if (two_k % 2 != 0 || two_k < 2) throw std::invalid_argument("phi index must be even >= 2");
    return phi_.at(static_cast<std::size_t>(two_k / 2));
  }

  /// f_n evaluated at a half-period point w_p (odd n give exactly zero).
  cx f_value(int p, int n) const {
    if (n == 0) return 1.0;
    if (n == 1) {
      // h_u at another half-period; zero at u itself is excluded by caller
      return ctx_->h_u(ctx_->half_period(spin_), ctx_->half_period(p));
    }
    const auto& T = Tval_.at(static_cast<std::size_t>(p));
    // wp^{(n-2)}(w_p) = (n-2)! T_{n-2}; f_n = wp^{(n-2)}/(n-1)! + phi (even n)
    cx val = T.at(static_cast<std::size_t>(n - 2)) / static_cast<double>(n - 1);
    if (n % 2 == 0) val += phi_.at(static_cast<std::size_t>(n / 2));
    return val;
  }

 private:
  void build_f() {
    f_.assign(static_cast<std::size_t>(P_) + 2, LaurentWindow<cx>(-P_ - 2, M_ + 2));
    LaurentWindow<cx> one(-P_ - 2, M_ + 2);
    one.set(0, 1.0);
    f_[0] = one;
    f_[1] = h_u_;
    phi_.assign(static_cast<std::size_t>(P_) / 2 + 2, cx(0.0));
    LaurentWindow<cx> d = wp_;  // wp^{(n-2)} progressively
    double fact = 1.0;          // (n-1)!
    for (int n = 2; n <= P_ + 1; ++n) {
      if (n > 2) {
        d = d.derivative();
        fact *= (n - 1);
      }
      LaurentWindow<cx> fn(-P_ - 2, M_ + 2);
      for (int k = fn.lo(); k <= std::min(fn.hi(), d.hi()); ++k)
        fn.set(k, ((n % 2 == 0) ? 1.0 : -1.0) * d.coeff(k) / fact);
      cx c0 = fn.coeff(0);
      fn.set(0, 0.0);
      if (n % 2 == 0) phi_.at(static_cast<std::size_t>(n / 2)) = -c0;
      f_[static_cast<std::size_t>(n)] = fn;
    }
    // half-period Taylor data for f-value evaluation
    for (int p = 0; p < 3; ++p) Tval_[static_cast<std::size_t>(p)] = ctx_->wp_taylor_at(ctx_->half_period(p), P_ + 2);
  }

  void build_kappa() {
    const int lo = -P_ - 2, hi = M_ + 2;
    // kappa_1 = z^{-1} sqrt(1 - e_u z^2 + sum a_j z^{2j+2}) with branch +1/z
    const int m = (hi - lo);
    std::vector<cx> unit(static_cast<std::size_t>(m) + 1, 0.0);
    unit[0] = 1.0;
    if (m >= 2) unit[2] = -eu_;
    for (int j = 1; 2 * j + 2 <= m; ++j) unit[static_cast<std::size_t>(2 * j + 2)] = a_[static_cast<std::size_t>(j)];
    auto sq = sqrt_unit(unit);
    auto inv = invert_unit(sq);
    kappa_.assign(static_cast<std::size_t>(P_) + 2, LaurentWindow<cx>(lo, hi));
    LaurentWindow<cx> k1(lo, hi), ik1(lo, hi);
    for (int k = 0; k <= m; ++k) {
      if (-1 + k <= hi) k1.set(-1 + k, sq[static_cast<std::size_t>(k)]);
      if (1 + k <= hi) ik1.set(1 + k, inv[static_cast<std::size_t>(k)]);
    }
    kappa_[1] = k1;
    inv_kappa1_ = ik1;
    if (P_ + 1 >= 2) kappa_[2] = window_mul(kappa_[1], h_u_, lo, hi);
    for (int n = 3; n <= P_ + 1; ++n) {
      auto cand = window_mul(kappa_[1], f_[static_cast<std::size_t>(n - 1)], lo, hi);
      for (int p = n - 2; p >= 1; --p) {
        cx c = cand.coeff(-p);
        if (scalar_norm(c) == 0.0) continue;
        cand = cand - c * kappa_[static_cast<std::size_t>(p)];
      }
      kappa_[static_cast<std::size_t>(n)] = cand;
    }
  }

  static std::vector<cx> sqrt_unit(const std::vector<cx>& u) {
    std::vector<cx> v(u.size(), 0.0);
    v[0] = 1.0;
    for (std::size_t k = 1; k < u.size(); ++k) {
      cx acc = 0.0;
      for (std::size_t j = 1; j + 1 <= k; ++j) acc += v[j] * v[k - j];
      v[k] = (u[k] - acc) / 2.0;
    }
    return v;
  }
  static std::vector<cx> invert_unit(const std::vector<cx>& u) {
    std::vector<cx> w(u.size(), 0.0);
    w[0] = 1.0;
    for (std::size_t k = 1; k < u.size(); ++k) {
      cx acc = 0.0;
      for (std::size_t j = 1; j <= k; ++j) acc += u[j] * w[k - j];
      w[k] = -acc;
    }
    return w;
  }

  const EllipticContext* ctx_;
  int spin_, P_, M_;
  cx eu_;
  std::vector<cx> a_;
  std::vector<cx> T_;
  std::array<std::vector<cx>, 3> Tval_;
  LaurentWindow<cx> wp_, wp_prime_, zeta_, zeta1_, h_u_, inv_kappa1_;
  std::vector<LaurentWindow<cx>> f_, kappa_;
  std::vector<cx> phi_;
};

// -- jet-valued component data for tau-derivative tracking ------------------

/// Everything the even gluing solver needs from one elliptic component, over
/// a scalar type (complex values or jets with d/dtau slots).
template <class S>
struct EvenComponentData {
  S A;                     // (2 pi i)^2 E2/12
  std::vector<S> a;        // wp Laurent coefficients a_j
  std::vector<S> phi2k;    // phi[2k] indexed by k
  std::array<std::vector<S>, 3> fvals;  // f_n(w_p) for the three half-periods
  std::array<S, 3> evals;  // wp(w_p)
  int window = 0;          // f_n available for n <= window
};

inline EvenComponentData<cx> even_component_values(const EllipticContext& ctx, int window, int spin = 0) {
  LaurentBasis lb(ctx, spin, window, window);
  EvenComponentData<cx> d;
  d.A = ctx.A();
  d.a = lb.wp_taylor0();
  d.phi2k.assign(static_cast<std::size_t>(window) / 2 + 2, cx(0.0));
  for (int k = 1; 2 * k <= window + 1; ++k) d.phi2k[static_cast<std::size_t>(k)] = lb.phi(2 * k);
  for (int p = 0; p < 3; ++p) {
    d.fvals[static_cast<std::size_t>(p)].assign(static_cast<std::size_t>(window) + 2, cx(0.0));
    d.evals[static_cast<std::size_t>(p)] = ctx.e(p);
    for (int n = 2; n <= window + 1; ++n)
      d.fvals[static_cast<std::size_t>(p)][static_cast<std::size_t>(n)] = lb.f_value(p, n);
    d.fvals[static_cast<std::size_t>(p)][0] = 1.0;
  }
  return d;
}

/// Jet flavor: derivative slot `slot` (1 or 2) tracks d/dtau of this
/// component; the other slot stays zero.  Uses the Ramanujan derivatives of
/// E2, E4, E6 and total tau-derivatives of the half-period values.
inline EvenComponentData<Jet3> even_component_jets(const EllipticContext& ctx, int window, int slot,
                                                   int spin = 0) {
  auto J = [&](cx v, cx dv) { return slot == 1 ? Jet3(v, dv, 0.0) : Jet3(v, 0.0, dv); };
  cx q = ctx.q();
  cx E2 = ctx.E2(), E4 = eisenstein_E4(q, ctx.q_terms()), E6 = eisenstein_E6(q, ctx.q_terms());
  cx dE2 = kTwoPiI * (E2 * E2 - E4) / 12.0;
  cx dE4 = kTwoPiI * (E2 * E4 - E6) / 3.0;
  cx dE6 = kTwoPiI * (E2 * E6 - E4 * E4) / 2.0;
  Jet3 g2 = J(ctx.g2(), 4.0 * std::pow(kPi, 4) / 3.0 * dE4);
  Jet3 g3 = J(ctx.g3(), 8.0 * std::pow(kPi, 6) / 27.0 * dE6);

  EvenComponentData<Jet3> d;
  d.window = window;
  d.A = J(ctx.A(), kTwoPiI * kTwoPiI / 12.0 * dE2);
  d.a = wp_laurent_coeffs<Jet3>(g2, g3, window + 4);

  // phi[2k] from the derivative windows of wp: constant coefficient of
  // wp^{(2k-2)}/(2k-1)! is a_{k-?}:   wp^{(2m)} has constant (2m)!*...
  // Work it from the Laurent coefficients directly: wp^{(2m)}(z) const term
  // = (2m)! a_m; f_{2m+2} = wp^{(2m)}/(2m+1)!; phi[2m+2] = -(2m)! a_m/(2m+1)!
  d.phi2k.assign(static_cast<std::size_t>(window) / 2 + 2, Jet3{});
  for (int k = 1; 2 * k <= window + 1; ++k) {
    int m = k - 1;
    if (m == 0) {
      d.phi2k[static_cast<std::size_t>(k)] = Jet3{};  // f_2 = wp has no constant
      continue;
    }
    Jet3 am = d.a[static_cast<std::size_t>(m)];
    d.phi2k[static_cast<std::size_t>(k)] = -am / Jet3(static_cast<double>(2 * m + 1));
  }

  for (int p = 0; p < 3; ++p) {
    Jet3 e = J(ctx.e(p), ctx.e_tau_derivative(p));
    d.evals[static_cast<std::size_t>(p)] = e;
    // Taylor recursion over jets, T1 = 0 exactly at half-periods
    int kmax = window + 2;
    std::vector<Jet3> T(static_cast<std::size_t>(kmax) + 1);
    T[0] = e;
    for (int k = 0; k + 2 <= kmax; ++k) {
      Jet3 conv{};
      for (int m2 = 0; m2 <= k; ++m2) conv += T[static_cast<std::size_t>(m2)] * T[static_cast<std::size_t>(k - m2)];
      Jet3 rhs = Jet3(6.0) * conv - (k == 0 ? g2 / Jet3(2.0) : Jet3{});
      T[static_cast<std::size_t>(k + 2)] = rhs / Jet3(static_cast<double>((k + 1) * (k + 2)));
    }
    auto& fv = d.fvals[static_cast<std::size_t>(p)];
    fv.assign(static_cast<std::size_t>(window) + 2, Jet3{});
    fv[0] = Jet3(1.0);
    for (int n = 2; n <= window + 1; ++n) {
      if (n % 2 != 0) continue;  // odd f vanish at half-periods
      Jet3 val = T[static_cast<std::size_t>(n - 2)] / Jet3(static_cast<double>(n - 1));
      val += d.phi2k[static_cast<std::size_t>(n / 2)];
      fv[static_cast<std::size_t>(n)] = val;
    }
  }
  return d;
}

}  // namespace superperiod
