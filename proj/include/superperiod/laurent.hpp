#pragma once

#include <stdexcept>
#include <vector>

#include "superperiod/grassmann.hpp"
#include "superperiod/truncated_series.hpp"

namespace superperiod {

inline bool window_is_zero(const cx& v) { return scalar_norm(v) == 0.0; }
template <class S>
inline bool window_is_zero(const BasicSeries<S>& v) { return !v.shaped() || v.is_zero(); }
template <class B>
inline bool window_is_zero(const GrassmannElement<B>& v) { return !v.shaped() || v.is_zero(); }

inline double window_abs(const cx& v) { return std::abs(v); }
template <class S>
inline double window_abs(const BasicSeries<S>& v) { return v.shaped() ? v.max_abs() : 0.0; }
template <class B>
inline double window_abs(const GrassmannElement<B>& v) { return v.shaped() ? v.max_abs() : 0.0; }

/// Finite Laurent coefficient window in a local chart coordinate.  A
/// default-constructed coefficient is an absorbing zero, so the container
/// works for plain scalars, truncated series, and Grassmann coefficients.
///
/// Degrees above hi() are dropped on write (regular-tail truncation, like a
/// power series); writing a nonzero coefficient below lo() is an error --
/// deeper poles mean the window was sized too small for the computation.
template <class C>
class LaurentWindow {
 public:
  LaurentWindow() = default;
  LaurentWindow(int lo, int hi) : lo_(lo), c_(static_cast<std::size_t>(hi - lo + 1)) {
    if (hi < lo) throw std::invalid_argument("laurent window: hi < lo");
  }

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }

  C coeff(int k) const {
    if (k < lo_ || k > hi()) return C{};
    return c_[static_cast<std::size_t>(k - lo_)];
  }
  void set(int k, const C& v) {
    if (k > hi()) return;  // beyond the regular tail of interest
    if (k < lo_) {
      if (window_is_zero(v)) return;
      throw std::runtime_error("laurent window: pole deeper than window");
    }
    c_[static_cast<std::size_t>(k - lo_)] = v;
  }
  void add(int k, const C& v) { set(k, coeff(k) + v); }

  bool is_zero() const {
    for (const auto& v : c_)
      if (!window_is_zero(v)) return false;
    return true;
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, window_abs(v));
    return m;
  }
  double max_abs_polar() const {
    double m = 0.0;
    for (int k = lo_; k <= std::min(hi(), -1); ++k) m = std::max(m, window_abs(coeff(k)));
    return m;
  }

  friend LaurentWindow operator+(const LaurentWindow& a, const LaurentWindow& b) {
    LaurentWindow r(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
    for (int k = r.lo(); k <= r.hi(); ++k) r.set(k, a.coeff(k) + b.coeff(k));
    return r;
  }
  friend LaurentWindow operator-(const LaurentWindow& a, const LaurentWindow& b) {
    LaurentWindow r(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
    for (int k = r.lo(); k <= r.hi(); ++k) r.set(k, a.coeff(k) - b.coeff(k));
    return r;
  }
  LaurentWindow operator-() const {
    LaurentWindow r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  template <class S>
  friend LaurentWindow operator*(const S& s, const LaurentWindow& w) {
    LaurentWindow r = w;
    for (auto& v : r.c_) v = s * v;
    return r;
  }

  /// d/dx of the window (the hi-degree coefficient is lost, by construction).
  LaurentWindow derivative() const {
    LaurentWindow r(lo_ - 1, hi() - 1);
    for (int k = lo_; k <= hi(); ++k) {
      if (k == 0) continue;
      r.set(k - 1, static_cast<double>(k) * coeff(k));
    }
    return r;
  }

  LaurentWindow polar_part() const {
    LaurentWindow r(lo_, hi());
    for (int k = lo_; k <= -1; ++k) r.set(k, coeff(k));
    return r;
  }
  LaurentWindow regular_part() const {
    LaurentWindow r(lo_, hi());
    for (int k = std::max(lo_, 0); k <= hi(); ++k) r.set(k, coeff(k));
    return r;
  }

  /// Restrict/extend to a window; nonzero coefficients outside [wlo, whi+inf)
  /// below wlo raise.
  LaurentWindow clamped(int wlo, int whi) const {
    LaurentWindow r(wlo, whi);
    for (int k = lo_; k <= hi(); ++k) {
      const C v = coeff(k);
      if (window_is_zero(v)) continue;
      r.set(k, v);  // throws if k < wlo
    }
    return r;
  }

 private:
  int lo_ = 0;
  std::vector<C> c_{C{}};
};

/// Product with explicit output window.  Coefficients that would land below
/// `out_lo` must vanish; coefficients above `out_hi` are dropped.
template <class C>
LaurentWindow<C> window_mul(const LaurentWindow<C>& a, const LaurentWindow<C>& b, int out_lo,
                            int out_hi) {
  LaurentWindow<C> r(out_lo, out_hi);
  for (int k = a.lo() + b.lo(); k <= out_hi; ++k) {
    C acc{};
    for (int i = std::max(a.lo(), k - b.hi()); i <= std::min(a.hi(), k - b.lo()); ++i)
      acc += a.coeff(i) * b.coeff(k - i);
    if (k < out_lo) {
      if (!window_is_zero(acc)) throw std::runtime_error("window_mul: pole deeper than window");
      continue;
    }
    r.set(k, acc);
  }
  return r;
}

/// Product of windows of mixed coefficient types (scalar window times
/// element window), multiplying on the left.
template <class S, class C>
LaurentWindow<C> window_scale_mul(const LaurentWindow<S>& a, const LaurentWindow<C>& b, int out_lo,
                                  int out_hi) {
  LaurentWindow<C> r(out_lo, out_hi);
  for (int k = a.lo() + b.lo(); k <= out_hi; ++k) {
    C acc{};
    for (int i = std::max(a.lo(), k - b.hi()); i <= std::min(a.hi(), k - b.lo()); ++i)
      acc += a.coeff(i) * b.coeff(k - i);
    if (k < out_lo) {
      if (!window_is_zero(acc)) throw std::runtime_error("window_scale_mul: pole deeper than window");
      continue;
    }
    r.set(k, acc);
  }
  return r;
}

}  // namespace superperiod
