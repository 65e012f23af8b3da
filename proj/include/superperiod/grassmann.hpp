#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "superperiod/truncated_series.hpp"

namespace superperiod {

enum class Parity { even, odd, mixed, zero };

/// Koszul sign picked up when the basis monomial e_A is multiplied by e_B
/// (subsets as bitmasks over a fixed generator order): (-1)^#{(i,j): i in A,
/// j in B, i > j}.
inline int koszul_sign(unsigned a, unsigned b) {
  int inversions = 0;
  unsigned rest = a;
  while (rest) {
    unsigned bit = rest & (~rest + 1u);
    inversions += std::popcount(b & (bit - 1u));
    rest &= rest - 1u;
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

/// Body concept hooks, found by ADL so additional body types (e.g. the
/// bivariate series used in the two-sector pairing) can provide overloads.
template <class S>
inline bool body_zero(const BasicSeries<S>& b) { return !b.shaped() || b.is_zero(); }
template <class S>
inline double body_abs(const BasicSeries<S>& b) { return b.shaped() ? b.max_abs() : 0.0; }
template <class S>
inline BasicSeries<S> body_inverse(const BasicSeries<S>& b) { return b.inverse(); }
template <class S>
inline BasicSeries<S> body_sqrt(const BasicSeries<S>& b, int branch) { return b.sqrt(branch); }
template <class S>
inline BasicSeries<S> body_one(const BasicSeries<S>& b) {
  return BasicSeries<S>::constant(b.var(), b.order(), S(1.0));
}
template <class S>
inline BasicSeries<S> body_scale(const cx& s, const BasicSeries<S>& b) {
  if (!b.shaped()) return b;
  return S(s) * b;
}

inline bool body_zero(const cx& b) { return scalar_norm(b) == 0.0; }
inline double body_abs(const cx& b) { return std::abs(b); }
inline cx body_inverse(const cx& b) { return 1.0 / b; }
inline cx body_sqrt(const cx& b, int branch) { return branch < 0 ? -std::sqrt(b) : std::sqrt(b); }
inline cx body_one(const cx&) { return cx(1.0); }
inline cx body_scale(const cx& s, const cx& b) { return s * b; }

/// Element of a Grassmann algebra over an ordered list of odd generators,
/// with coefficients in a commutative body (a truncated series or a plain
/// scalar wrapper).  Terms are indexed by generator-subset bitmask.
///
/// A default-constructed element is an unshaped zero that adopts the
/// generator set of whatever it combines with; two shaped elements with
/// different generator lists never mix.
template <class Body>
class GrassmannElement {
 public:
  GrassmannElement() = default;

  explicit GrassmannElement(std::vector<std::string> gens) : gens_(std::move(gens)) {
    if (gens_.size() > 8) throw std::invalid_argument("more than 8 odd generators");
    terms_.assign(std::size_t{1} << gens_.size(), Body{});
    shaped_ = true;
  }

  static GrassmannElement scalar(std::vector<std::string> gens, const Body& b) {
    GrassmannElement g(std::move(gens));
    g.terms_[0] = b;
    return g;
  }
  static GrassmannElement generator(std::vector<std::string> gens, const std::string& name,
                                    const Body& one) {
    GrassmannElement g(gens);
    g.terms_[g.mask_of({name})] = one;
    return g;
  }

  bool shaped() const { return shaped_; }
  const std::vector<std::string>& generators() const { return gens_; }
  std::size_t n_terms() const { return terms_.size(); }

  const Body& term(unsigned mask) const { return terms_.at(mask); }
  void set_term(unsigned mask, const Body& b) { terms_.at(mask) = b; }

  unsigned mask_of(std::initializer_list<const char*> names) const {
    std::vector<std::string> v;
    for (auto* n : names) v.emplace_back(n);
    return mask_of(v);
  }
  unsigned mask_of(const std::vector<std::string>& names) const {
    unsigned m = 0;
    for (const auto& n : names) {
      bool found = false;
      for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i] == n) {
          m |= (1u << i);
          found = true;
          break;
        }
      if (!found) throw std::invalid_argument("unknown generator: " + n);
    }
    return m;
  }
  /// Coefficient of the sorted monomial with the given generator names.
  const Body& coeff(std::initializer_list<const char*> names) const { return terms_.at(mask_of(names)); }

  bool is_zero() const {
    for (const auto& t : terms_)
      if (!body_zero(t)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, body_abs(t));
    return m;
  }

  Parity parity() const {
    bool has_even = false, has_odd = false;
    for (unsigned m = 0; m < terms_.size(); ++m) {
      if (body_zero(terms_[m])) continue;
      (std::popcount(m) % 2 == 0 ? has_even : has_odd) = true;
    }
    if (has_even && has_odd) return Parity::mixed;
    if (has_even) return Parity::even;
    if (has_odd) return Parity::odd;
    return Parity::zero;
  }

  GrassmannElement& operator+=(const GrassmannElement& o) { return combine(o, +1); }
  GrassmannElement& operator-=(const GrassmannElement& o) { return combine(o, -1); }
  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { a += b; return a; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { a -= b; return a; }

  GrassmannElement operator-() const {
    GrassmannElement r = *this;
    for (auto& t : r.terms_) t = -t;
    return r;
  }

  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
    if (!a.shaped_) return a;
    if (!b.shaped_) return b;
    check_compatible(a, b);
    GrassmannElement r(a.gens_);
    for (unsigned ma = 0; ma < a.terms_.size(); ++ma) {
      if (body_zero(a.terms_[ma])) continue;
      for (unsigned mb = 0; mb < b.terms_.size(); ++mb) {
        if (ma & mb) continue;
        if (body_zero(b.terms_[mb])) continue;
        Body prod = a.terms_[ma] * b.terms_[mb];
        if (koszul_sign(ma, mb) < 0) prod = -prod;
        r.terms_[ma | mb] += prod;
      }
    }
    return r;
  }
  GrassmannElement& operator*=(const GrassmannElement& o) { *this = *this * o; return *this; }

  friend GrassmannElement operator*(const Body& s, GrassmannElement a) {
    for (auto& t : a.terms_) t = s * t;
    return a;
  }
  friend GrassmannElement operator*(double s, GrassmannElement a) {
    for (auto& t : a.terms_) t = s * t;
    return a;
  }
  friend GrassmannElement operator*(const cx& s, GrassmannElement a) {
    for (auto& t : a.terms_) t = body_scale(s, t);
    return a;
  }

  /// Inverse: requires an invertible empty-subset component; the nilpotent
  /// remainder is handled by a finite geometric series.
  GrassmannElement inverse() const {
    if (!shaped_) throw std::domain_error("grassmann inverse: zero element");
    if (body_zero(terms_[0])) throw std::domain_error("grassmann inverse: body not invertible");
    GrassmannElement inv0 = GrassmannElement::scalar(gens_, body_inverse(terms_[0]));
    GrassmannElement nil = *this;
    nil.terms_[0] = Body{};
    // (a0 + n)^-1 = sum_k (-1)^k a0^{-k-1} n^k, n^{g+1} = 0
    GrassmannElement result = inv0;
    GrassmannElement pow = inv0;  // a0^{-1} n^0 so far
    for (std::size_t k = 1; k <= gens_.size(); ++k) {
      pow = pow * nil * inv0;
      result += (k % 2 == 0) ? pow : -pow;
      if (pow.is_zero()) break;
    }
    return result;
  }

  /// Square root: sqrt(a0) * (1 + w)^{1/2} with w nilpotent, binomial series.
  GrassmannElement sqrt(int branch = +1) const {
    if (!shaped_) throw std::domain_error("grassmann sqrt: zero element");
    if (body_zero(terms_[0])) throw std::domain_error("grassmann sqrt: body has no invertible part");
    Body r0 = body_sqrt(terms_[0], branch);
    GrassmannElement root0 = GrassmannElement::scalar(gens_, r0);
    GrassmannElement w = *this;
    w.terms_[0] = Body{};
    GrassmannElement winv0 = GrassmannElement::scalar(gens_, body_inverse(terms_[0]));
    w = w * winv0;  // nilpotent part of a / a0
    GrassmannElement acc = GrassmannElement::scalar(gens_, body_one(terms_[0]));
    GrassmannElement pow = acc;
    double binom = 1.0;
    for (std::size_t k = 1; k <= gens_.size(); ++k) {
      binom *= (0.5 - static_cast<double>(k - 1)) / static_cast<double>(k);
      pow = pow * w;
      if (pow.is_zero()) break;
      acc += binom * pow;
    }
    return root0 * acc;
  }

  /// Component with all generators of `mask` removed from the labels kept
  /// as-is; convenience for extracting e.g. the eta1*eta2 part as a Body.
  Body body_component(unsigned mask) const { return terms_.at(mask); }

 private:
  void require_shaped() const {
    if (!shaped_) throw std::logic_error("operation on unshaped grassmann element");
  }
  static void check_compatible(const GrassmannElement& a, const GrassmannElement& b) {
    if (a.gens_ != b.gens_) throw std::invalid_argument("grassmann generator set mismatch");
  }
  GrassmannElement& combine(const GrassmannElement& o, int sign) {
    if (!o.shaped_) return *this;
    if (!shaped_) {
      *this = (sign > 0) ? o : -o;
      return *this;
    }
    check_compatible(*this, o);
    for (unsigned m = 0; m < terms_.size(); ++m)
      terms_[m] += (sign > 0) ? o.terms_[m] : -o.terms_[m];
    return *this;
  }

  std::vector<std::string> gens_;
  std::vector<Body> terms_;
  bool shaped_ = false;
};

template <class Body>
double grassmann_rel_dist(const GrassmannElement<Body>& a, const GrassmannElement<Body>& b,
                          double floor_scale = 1.0) {
  GrassmannElement<Body> d = a - b;
  double scale = std::max({a.max_abs(), b.max_abs(), floor_scale});
  return d.max_abs() / scale;
}

using GElem = GrassmannElement<TruncatedSeries>;

/// Conventional generator lists.
inline std::vector<std::string> gens_eta2() { return {"eta1", "eta2"}; }
inline std::vector<std::string> gens_eta4() { return {"eta1", "eta2", "etat1", "etat2"}; }
/// Node-chart algebras: the odd chart coordinate joins the base odd
/// coordinates so Koszul signs come out of the engine, not hand bookkeeping.
inline std::vector<std::string> gens_eta2_theta() { return {"eta1", "eta2", "theta"}; }

}  // namespace superperiod
