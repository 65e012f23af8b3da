#pragma once

#include <cmath>
#include <complex>

#include "superperiod/truncated_series.hpp"

namespace superperiod {

/// First-order jet carrying a value together with d/dtau1 and d/dtau2.
/// Running the even gluing pipeline over Jet3 coefficients yields the
/// term-wise tau-derivatives of every expansion coefficient exactly.
struct Jet3 {
  cx v{};
  cx d1{};
  cx d2{};

  Jet3() = default;
  Jet3(double x) : v(x) {}
  Jet3(const cx& x) : v(x) {}
  Jet3(const cx& x, const cx& dd1, const cx& dd2) : v(x), d1(dd1), d2(dd2) {}

  friend Jet3 operator+(const Jet3& a, const Jet3& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
  friend Jet3 operator-(const Jet3& a, const Jet3& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
  Jet3 operator-() const { return {-v, -d1, -d2}; }
  Jet3& operator+=(const Jet3& o) { *this = *this + o; return *this; }
  Jet3& operator-=(const Jet3& o) { *this = *this - o; return *this; }

  friend Jet3 operator*(const Jet3& a, const Jet3& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + a.v * b.d2};
  }
  Jet3& operator*=(const Jet3& o) { *this = *this * o; return *this; }

  friend Jet3 operator/(const Jet3& a, const Jet3& b) {
    cx q = a.v / b.v;
    return {q, (a.d1 - q * b.d1) / b.v, (a.d2 - q * b.d2) / b.v};
  }
};

inline double scalar_norm(const Jet3& j) { return std::norm(j.v); }
inline Jet3 scalar_sqrt(const Jet3& j) {
  cx r = std::sqrt(j.v);
  return {r, j.d1 / (2.0 * r), j.d2 / (2.0 * r)};
}

using JetSeries = BasicSeries<Jet3>;

inline TruncatedSeries jet_values(const JetSeries& s) {
  TruncatedSeries r(s.var(), s.order());
  for (int k = s.lo(); k <= s.order(); ++k) r.set_coeff(k, s.coeff(k).v);
  return r;
}
inline TruncatedSeries jet_dtau(const JetSeries& s, int which) {
  TruncatedSeries r(s.var(), s.order());
  for (int k = s.lo(); k <= s.order(); ++k)
    r.set_coeff(k, which == 1 ? s.coeff(k).d1 : s.coeff(k).d2);
  return r;
}

}  // namespace superperiod
