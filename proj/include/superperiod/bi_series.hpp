#pragma once

#include <stdexcept>
#include <vector>

#include "superperiod/truncated_series.hpp"

namespace superperiod {

/// Truncated power series in the two smoothing parameters (t, t~) of the two
/// holomorphic sectors.  Degrees are clamped at (nt, ntt); no principal
/// parts -- structural pole prefactors are divided out explicitly with the
/// shift operations, which check exactness.
class BiSeries {
 public:
  BiSeries() = default;
  BiSeries(int nt, int ntt) : nt_(nt), ntt_(ntt), c_((nt + 1) * (ntt + 1)) {
    if (nt < 0 || ntt < 0) throw std::invalid_argument("bi-series orders must be >= 0");
  }
  static BiSeries constant(int nt, int ntt, cx v) {
    BiSeries b(nt, ntt);
    b.at(0, 0) = v;
    return b;
  }

  bool shaped() const { return !c_.empty(); }
  int nt() const { return nt_; }
  int ntt() const { return ntt_; }

  cx coeff(int i, int j) const {
    if (!shaped() || i < 0 || j < 0 || i > nt_ || j > ntt_) return {};
    return c_[idx(i, j)];
  }
  void set_coeff(int i, int j, cx v) {
    require_shaped();
    if (i < 0 || j < 0) throw std::invalid_argument("bi-series: negative degree");
    if (i > nt_ || j > ntt_) {
      if (scalar_norm(v) == 0.0) return;
      throw std::invalid_argument("bi-series: coefficient beyond truncation");
    }
    c_[idx(i, j)] = v;
  }

  bool is_zero() const {
    for (const auto& v : c_)
      if (scalar_norm(v) != 0.0) return false;
    return true;
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  BiSeries& operator+=(const BiSeries& o) { return combine(o, +1); }
  BiSeries& operator-=(const BiSeries& o) { return combine(o, -1); }
  friend BiSeries operator+(BiSeries a, const BiSeries& b) { a += b; return a; }
  friend BiSeries operator-(BiSeries a, const BiSeries& b) { a -= b; return a; }
  BiSeries operator-() const {
    BiSeries r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  friend BiSeries operator*(const BiSeries& a, const BiSeries& b) {
    if (!a.shaped()) return a;
    if (!b.shaped()) return b;
    check(a, b);
    BiSeries r(a.nt_, a.ntt_);
    for (int i = 0; i <= a.nt_; ++i)
      for (int j = 0; j <= a.ntt_; ++j) {
        cx v = a.coeff(i, j);
        if (scalar_norm(v) == 0.0) continue;
        for (int k = 0; i + k <= a.nt_; ++k)
          for (int l = 0; j + l <= a.ntt_; ++l) r.c_[r.idx(i + k, j + l)] += v * b.coeff(k, l);
      }
    return r;
  }
  BiSeries& operator*=(const BiSeries& o) { *this = *this * o; return *this; }
  friend BiSeries operator*(const cx& s, BiSeries a) {
    for (auto& v : a.c_) v = s * v;
    return a;
  }
  friend BiSeries operator*(double s, BiSeries a) { return cx(s) * a; }

  /// Inverse; requires an invertible (0,0) coefficient.
  BiSeries inverse() const {
    require_shaped();
    cx c00 = coeff(0, 0);
    if (scalar_norm(c00) == 0.0) throw std::domain_error("bi-series inverse: zero constant term");
    BiSeries r(nt_, ntt_);
    for (int s = 0; s <= nt_ + ntt_; ++s)
      for (int i = std::max(0, s - ntt_); i <= std::min(s, nt_); ++i) {
        int j = s - i;
        if (i == 0 && j == 0) {
          r.at(0, 0) = 1.0 / c00;
          continue;
        }
        cx acc = 0.0;
        for (int k = 0; k <= i; ++k)
          for (int l = 0; l <= j; ++l) {
            if (k == i && l == j) continue;
            acc += coeff(i - k, j - l) * r.coeff(k, l);
          }
        r.at(i, j) = -acc / c00;
      }
    return r;
  }

  /// Multiply by t^k t~^l with negative powers requiring exact divisibility.
  BiSeries shifted(int k, int l) const {
    require_shaped();
    BiSeries r(nt_, ntt_);
    for (int i = 0; i <= nt_; ++i)
      for (int j = 0; j <= ntt_; ++j) {
        cx v = coeff(i, j);
        if (scalar_norm(v) == 0.0) continue;
        int ni = i + k, nj = j + l;
        if (ni < 0 || nj < 0)
          throw std::domain_error("bi-series shift: not divisible by the requested power");
        if (ni > nt_ || nj > ntt_) continue;
        r.at(ni, nj) = v;
      }
    return r;
  }

  cx eval00() const { return coeff(0, 0); }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * (ntt_ + 1) + j; }
  cx& at(int i, int j) { return c_[idx(i, j)]; }
  void require_shaped() const {
    if (!shaped()) throw std::logic_error("operation on unshaped bi-series");
  }
  static void check(const BiSeries& a, const BiSeries& b) {
    if (a.nt_ != b.nt_ || a.ntt_ != b.ntt_)
      throw std::invalid_argument("bi-series truncation mismatch");
  }
  BiSeries& combine(const BiSeries& o, int sign) {
    if (!o.shaped()) return *this;
    if (!shaped()) {
      *this = (sign > 0) ? o : -o;
      return *this;
    }
    check(*this, o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += (sign > 0) ? o.c_[k] : -o.c_[k];
    return *this;
  }

  int nt_ = 0, ntt_ = 0;
  std::vector<cx> c_;
};

/// Grassmann body hooks (ADL).
inline bool body_zero(const BiSeries& b) { return !b.shaped() || b.is_zero(); }
inline double body_abs(const BiSeries& b) { return b.shaped() ? b.max_abs() : 0.0; }
inline BiSeries body_inverse(const BiSeries& b) { return b.inverse(); }
inline BiSeries body_sqrt(const BiSeries&, int) {
  throw std::logic_error("bi-series sqrt not supported");
}
inline BiSeries body_one(const BiSeries& b) { return BiSeries::constant(b.nt(), b.ntt(), 1.0); }
inline BiSeries body_scale(const cx& s, const BiSeries& b) { return s * b; }

/// Embed a univariate t-series into the first (sector == 1) or second
/// (sector == 2) variable of a bi-series.
inline BiSeries embed_sector(const TruncatedSeries& s, int sector, int nt, int ntt) {
  BiSeries r(nt, ntt);
  if (!s.shaped()) return r;
  if (s.lo() < 0) throw std::domain_error("embed_sector: principal part not representable");
  for (int k = s.lo(); k <= s.order(); ++k) {
    cx v = s.coeff(k);
    if (scalar_norm(v) == 0.0) continue;
    if (sector == 1) {
      if (k <= nt) r.set_coeff(k, 0, v);
    } else {
      if (k <= ntt) r.set_coeff(0, k, v);
    }
  }
  return r;
}

}  // namespace superperiod
