#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace superperiod {

using cx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline const cx kTwoPiI{0.0, 2.0 * kPi};

/// Formal expansion variables.  Arithmetic refuses to mix them, so the
/// identification q = -t^2 (or q = q_half^2) has to be applied explicitly.
enum class Var : std::uint8_t { t, q, q_half, t_conj };

inline const char* var_name(Var v) {
  switch (v) {
    case Var::t: return "t";
    case Var::q: return "q";
    case Var::q_half: return "q_half";
    case Var::t_conj: return "t~";
  }
  return "?";
}

// Scalar concept hooks; found by ADL so coefficient types defined later
// (e.g. Jet3) can provide their own overloads.
inline double scalar_norm(const cx& z) { return std::norm(z); }
inline cx scalar_sqrt(const cx& z) { return std::sqrt(z); }

/// Power series in one formal variable, hard-truncated at degree `order`.
/// A bounded principal part (negative degrees, down to `kMinDegree`) is
/// allowed so structural poles in the smoothing parameter can be carried.
///
/// A default-constructed series is an "unshaped" zero: it combines with any
/// shaped series and adopts its variable and order.  Two shaped series with
/// different variables or truncation orders never mix silently.
template <class S>
class BasicSeries {
 public:
  static constexpr int kMinDegree = -24;
  static constexpr int kUnshaped = std::numeric_limits<int>::min();

  BasicSeries() = default;
  BasicSeries(Var v, int order) : var_(v), order_(order), lo_(0) {
    if (order < 0) throw std::invalid_argument("series order must be >= 0");
    c_.assign(static_cast<std::size_t>(order) + 1, S{});
  }

  static BasicSeries constant(Var v, int order, const S& value) {
    BasicSeries s(v, order);
    s.c_[0] = value;
    return s;
  }
  /// coeff * var^deg
  static BasicSeries monomial(Var v, int order, int deg, const S& coeff) {
    BasicSeries s(v, order);
    s.set_coeff(deg, coeff);
    return s;
  }

  bool shaped() const { return order_ != kUnshaped; }
  Var var() const { require_shaped(); return var_; }
  int order() const { require_shaped(); return order_; }
  int lo() const { return shaped() ? lo_ : 0; }

  S coeff(int k) const {
    if (!shaped() || k < lo_ || k > order_) return S{};
    return c_[static_cast<std::size_t>(k - lo_)];
  }

  void set_coeff(int k, const S& v) {
    require_shaped();
    if (k > order_) {
      if (scalar_norm(v) == 0.0) return;
      throw std::invalid_argument("coefficient beyond truncation order");
    }
    if (k < lo_) {
      if (k < kMinDegree) throw std::invalid_argument("principal part too deep");
      c_.insert(c_.begin(), static_cast<std::size_t>(lo_ - k), S{});
      lo_ = k;
    }
    c_[static_cast<std::size_t>(k - lo_)] = v;
  }

  bool is_zero() const {
    for (const auto& v : c_)
      if (scalar_norm(v) != 0.0) return false;
    return true;
  }

  /// Largest |coeff| (by sqrt of scalar_norm).
  double max_abs() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::sqrt(scalar_norm(v)));
    return m;
  }

  /// Lowest degree with a (structurally) nonzero coefficient; order()+1 if zero.
  int lowest_nonzero() const {
    require_shaped();
    for (int k = lo_; k <= order_; ++k)
      if (scalar_norm(coeff(k)) != 0.0) return k;
    return order_ + 1;
  }

  BasicSeries& operator+=(const BasicSeries& o) { return combine(o, +1); }
  BasicSeries& operator-=(const BasicSeries& o) { return combine(o, -1); }

  friend BasicSeries operator+(BasicSeries a, const BasicSeries& b) { a += b; return a; }
  friend BasicSeries operator-(BasicSeries a, const BasicSeries& b) { a -= b; return a; }

  BasicSeries operator-() const {
    BasicSeries r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  friend BasicSeries operator*(const BasicSeries& a, const BasicSeries& b) {
    if (!a.shaped() || !b.shaped()) return BasicSeries{};
    check_compatible(a, b);
    BasicSeries r(a.var_, a.order_);
    int lo = a.lo_ + b.lo_;
    if (lo < 0) {
      // keep only the part of the principal window that is actually populated
      int la = a.lowest_nonzero(), lb = b.lowest_nonzero();
      if (la > a.order_ || lb > b.order_) return r;  // one factor is zero
      lo = la + lb;
      if (lo < kMinDegree) throw std::invalid_argument("series product: principal part too deep");
    }
    if (lo > 0) lo = std::min(lo, a.order_ + 1);
    for (int k = lo; k <= a.order_; ++k) {
      S acc{};
      for (int i = std::max(a.lowest(), k - b.order_); i <= std::min(a.order_, k - b.lowest()); ++i)
        acc += a.coeff(i) * b.coeff(k - i);
      if (scalar_norm(acc) != 0.0) r.set_coeff(k, acc);
    }
    return r;
  }

  BasicSeries& operator*=(const BasicSeries& o) { *this = *this * o; return *this; }

  friend BasicSeries operator*(const S& s, BasicSeries a) {
    for (auto& v : a.c_) v = s * v;
    return a;
  }
  friend BasicSeries operator*(BasicSeries a, const S& s) { return s * a; }
  friend BasicSeries operator*(double s, BasicSeries a) { return S(s) * a; }

  /// Multiplication by var^k (degree shift).  Coefficients pushed beyond the
  /// truncation order are dropped; pushing the principal part below the floor
  /// is an error.
  BasicSeries shifted(int k) const {
    require_shaped();
    BasicSeries r(var_, order_);
    for (int d = lo_; d <= order_; ++d) {
      if (d + k > order_) break;
      S v = coeff(d);
      if (scalar_norm(v) != 0.0) r.set_coeff(d + k, v);
    }
    return r;
  }

  /// Multiplicative inverse.  The lowest stored nonzero coefficient must be
  /// invertible; for a plain power series this is the |c0| > 0 condition.
  BasicSeries inverse() const {
    require_shaped();
    int l = lowest_nonzero();
    if (l > order_) throw std::domain_error("series inverse: zero series");
    // a = c_l x^l (1 + u), u = higher terms / (c_l x^l)
    S c0 = coeff(l);
    int m = order_ - l;  // number of unit-part coefficients we can produce
    std::vector<S> u(static_cast<std::size_t>(m) + 1, S{});
    for (int k = 1; k <= m; ++k) u[static_cast<std::size_t>(k)] = coeff(l + k) / c0;
    // invert 1 + u by long division
    std::vector<S> w(static_cast<std::size_t>(m) + 1, S{});
    w[0] = S(1.0);
    for (int k = 1; k <= m; ++k) {
      S acc{};
      for (int j = 1; j <= k; ++j) acc += u[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(k - j)];
      w[static_cast<std::size_t>(k)] = -acc;
    }
    if (-l < kMinDegree) throw std::domain_error("series inverse: pole too deep to represent");
    BasicSeries r(var_, order_);
    S inv0 = S(1.0) / c0;
    for (int k = 0; k <= m; ++k) {
      int deg = -l + k;
      if (deg > order_) break;
      r.set_coeff(deg, inv0 * w[static_cast<std::size_t>(k)]);
    }
    return r;
  }

  friend BasicSeries operator/(const BasicSeries& a, const BasicSeries& b) { return a * b.inverse(); }

  /// Square root with the branch of the leading coefficient selected by
  /// `branch` (+1: principal, -1: negated).  The lowest nonzero degree must
  /// be even.
  BasicSeries sqrt(int branch = +1) const {
    require_shaped();
    int l = lowest_nonzero();
    if (l > order_) throw std::domain_error("series sqrt: zero series");
    if (l % 2 != 0) throw std::domain_error("series sqrt: odd leading degree");
    S c0 = coeff(l);
    S r0 = scalar_sqrt(c0);
    if (branch < 0) r0 = -r0;
    int m = order_ - l;
    // normalized unit part 1 + u
    std::vector<S> u(static_cast<std::size_t>(m) + 1, S{});
    u[0] = S(1.0);
    for (int k = 1; k <= m; ++k) u[static_cast<std::size_t>(k)] = coeff(l + k) / c0;
    // v = sqrt(1+u): v0=1, v_k = (u_k - sum_{j=1..k-1} v_j v_{k-j}) / 2
    std::vector<S> v(static_cast<std::size_t>(m) + 1, S{});
    v[0] = S(1.0);
    for (int k = 1; k <= m; ++k) {
      S acc{};
      for (int j = 1; j <= k - 1; ++j) acc += v[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(k - j)];
      v[static_cast<std::size_t>(k)] = (u[static_cast<std::size_t>(k)] - acc) / S(2.0);
    }
    BasicSeries r(var_, order_);
    for (int k = 0; k <= m; ++k) {
      int deg = l / 2 + k;
      if (deg > order_) break;
      if (deg < kMinDegree) throw std::domain_error("series sqrt: pole too deep");
      r.set_coeff(deg, r0 * v[static_cast<std::size_t>(k)]);
    }
    return r;
  }

  /// d/dvar
  BasicSeries derivative() const {
    require_shaped();
    BasicSeries r(var_, order_);
    for (int k = lo_; k <= order_; ++k) {
      if (k == 0) continue;
      int deg = k - 1;
      if (deg < kMinDegree || deg > order_) continue;
      r.set_coeff(deg, S(static_cast<double>(k)) * coeff(k));
    }
    return r;
  }

  /// Numeric evaluation at a point (principal part included).
  S evaluate(const S& x) const {
    require_shaped();
    S acc{};
    for (int k = order_; k >= lo_; --k) acc = acc * x + coeff(k);
    for (int k = 0; k > lo_; --k) acc = acc / x;
    return acc;
  }

  /// Deliberate re-truncation (explicit, never implicit).
  BasicSeries with_order(int new_order) const {
    require_shaped();
    BasicSeries r(var_, new_order);
    for (int k = lo_; k <= std::min(order_, new_order); ++k) {
      S v = coeff(k);
      if (scalar_norm(v) != 0.0) r.set_coeff(k, v);
    }
    return r;
  }

  /// Deliberate variable relabeling (e.g. folding q = q_half^2 results back).
  BasicSeries with_var(Var v) const {
    BasicSeries r = *this;
    r.var_ = v;
    return r;
  }

  /// Substitute var -> c * var^k (k >= 1); used for q = -t^2.
  /// The result is truncated at `new_order` in the new variable.
  BasicSeries substitute_monomial(Var new_var, int new_order, const S& c, int k) const {
    require_shaped();
    if (k < 1) throw std::invalid_argument("substitute_monomial: k must be >= 1");
    BasicSeries r(new_var, new_order);
    for (int d = lo_; d <= order_; ++d) {
      S v = coeff(d);
      if (scalar_norm(v) == 0.0) continue;
      int nd = d * k;
      if (nd > new_order) continue;
      S scale = v;
      for (int i = 0; i < std::abs(d); ++i) scale = (d > 0) ? scale * c : scale / c;
      r.set_coeff(nd, r.coeff(nd) + scale);
    }
    return r;
  }

 private:
  int lowest() const { return lo_; }

  void require_shaped() const {
    if (!shaped()) throw std::logic_error("operation on unshaped series");
  }

  static void check_compatible(const BasicSeries& a, const BasicSeries& b) {
    if (a.var_ != b.var_)
      throw std::invalid_argument(std::string("series variable mismatch: ") + var_name(a.var_) +
                                  " vs " + var_name(b.var_));
    if (a.order_ != b.order_) throw std::invalid_argument("series truncation order mismatch");
  }

  BasicSeries& combine(const BasicSeries& o, int sign) {
    if (!o.shaped()) return *this;
    if (!shaped()) {
      *this = (sign > 0) ? o : -o;
      return *this;
    }
    check_compatible(*this, o);
    for (int k = o.lo_; k <= order_; ++k) {
      S v = o.coeff(k);
      if (scalar_norm(v) == 0.0) continue;
      set_coeff(k, coeff(k) + (sign > 0 ? v : -v));
    }
    return *this;
  }

  Var var_ = Var::t;
  int order_ = kUnshaped;
  int lo_ = 0;
  std::vector<S> c_;
};

using TruncatedSeries = BasicSeries<cx>;

/// Relative distance between two series, coefficient-wise, normalized by the
/// largest coefficient magnitude of either side (with an absolute floor).
template <class S>
double series_rel_dist(const BasicSeries<S>& a, const BasicSeries<S>& b, double floor_scale = 1.0) {
  BasicSeries<S> d = a - b;
  double scale = std::max({a.max_abs(), b.max_abs(), floor_scale});
  return d.max_abs() / scale;
}

/// Same, restricted to degrees <= kmax (for quantities determined only to a
/// limited order).
template <class S>
double series_rel_dist_low(const BasicSeries<S>& a, const BasicSeries<S>& b, int kmax,
                           double floor_scale = 1.0) {
  double scale = std::max({a.max_abs(), b.max_abs(), floor_scale});
  double worst = 0.0;
  int lo = std::min(a.lo(), b.lo());
  for (int k = lo; k <= kmax; ++k)
    worst = std::max(worst, std::sqrt(scalar_norm(a.coeff(k) - b.coeff(k))));
  return worst / scale;
}

}  // namespace superperiod
