#pragma once

#include <stdexcept>
#include <vector>

#include "superperiod/grassmann.hpp"

namespace superperiod {

/// Dense matrix over Grassmann elements.  Entry order is row-major; entries
/// multiply in matrix order, the graded signs live inside the element type.
template <class Body>
struct GMatrix {
  using Elem = GrassmannElement<Body>;
  int rows = 0, cols = 0;
  std::vector<Elem> e;

  GMatrix() = default;
  GMatrix(int r, int c) : rows(r), cols(c), e(static_cast<std::size_t>(r) * c) {}

  Elem& at(int i, int j) { return e[static_cast<std::size_t>(i) * cols + j]; }
  const Elem& at(int i, int j) const { return e[static_cast<std::size_t>(i) * cols + j]; }

  friend GMatrix operator*(const GMatrix& a, const GMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matrix shape mismatch");
    GMatrix r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < b.cols; ++j) {
        typename GMatrix::Elem acc;
        for (int k = 0; k < a.cols; ++k) acc += a.at(i, k) * b.at(k, j);
        r.at(i, j) = acc;
      }
    return r;
  }
  friend GMatrix operator-(const GMatrix& a, const GMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("matrix shape mismatch");
    GMatrix r(a.rows, a.cols);
    for (std::size_t k = 0; k < r.e.size(); ++k) r.e[k] = a.e[k] - b.e[k];
    return r;
  }
  friend GMatrix operator+(const GMatrix& a, const GMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("matrix shape mismatch");
    GMatrix r(a.rows, a.cols);
    for (std::size_t k = 0; k < r.e.size(); ++k) r.e[k] = a.e[k] + b.e[k];
    return r;
  }
};

/// Determinant by cofactor expansion; valid when the entries commute
/// (even-parity Grassmann elements).
template <class Body>
GrassmannElement<Body> det_even(const GMatrix<Body>& m) {
  if (m.rows != m.cols) throw std::invalid_argument("det of non-square matrix");
  const int n = m.rows;
  if (n == 0) throw std::invalid_argument("det of empty matrix");
  if (n == 1) return m.at(0, 0);
  if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
  GrassmannElement<Body> acc;
  for (int j = 0; j < n; ++j) {
    GMatrix<Body> minor(n - 1, n - 1);
    for (int i = 1; i < n; ++i) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor.at(i - 1, cc++) = m.at(i, c);
      }
    }
    auto term = m.at(0, j) * det_even(minor);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

/// Inverse via the adjugate (n <= 3), entries assumed even.
template <class Body>
GMatrix<Body> inverse_even(const GMatrix<Body>& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse of non-square matrix");
  const int n = m.rows;
  auto dinv = det_even(m).inverse();
  GMatrix<Body> r(n, n);
  if (n == 1) {
    r.at(0, 0) = dinv;
    return r;
  }
  if (n == 2) {
    r.at(0, 0) = m.at(1, 1) * dinv;
    r.at(1, 1) = m.at(0, 0) * dinv;
    r.at(0, 1) = -m.at(0, 1) * dinv;
    r.at(1, 0) = -m.at(1, 0) * dinv;
    return r;
  }
  if (n == 3) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        // cofactor C_ji for the adjugate
        int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        auto cof = m.at(r0, c0) * m.at(r1, c1) - m.at(r0, c1) * m.at(r1, c0);
        r.at(i, j) = cof * dinv;
      }
    return r;
  }
  throw std::invalid_argument("inverse_even implemented for n <= 3");
}

/// tr(adj(A) B) for 2x2 matrices: the polarization of det,
/// det(A+B) = det A + <A,B> + det B.
template <class Body>
GrassmannElement<Body> det2_pairing(const GMatrix<Body>& a, const GMatrix<Body>& b) {
  if (a.rows != 2 || a.cols != 2 || b.rows != 2 || b.cols != 2)
    throw std::invalid_argument("det2_pairing wants 2x2 matrices");
  return a.at(0, 0) * b.at(1, 1) + a.at(1, 1) * b.at(0, 0) - a.at(0, 1) * b.at(1, 0) -
         a.at(1, 0) * b.at(0, 1);
}

/// Square matrix in block form with `p` even rows/columns followed by `q`
/// odd rows/columns.
template <class Body>
struct SuperMatrix {
  int p = 0, q = 0;
  GMatrix<Body> m;

  SuperMatrix(int p_, int q_) : p(p_), q(q_), m(p_ + q_, p_ + q_) {}

  GMatrix<Body> block(int r0, int c0, int nr, int nc) const {
    GMatrix<Body> b(nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) b.at(i, j) = m.at(r0 + i, c0 + j);
    return b;
  }

  /// Consistency of entry parities with the row/column signature.
  bool parity_consistent() const {
    for (int i = 0; i < p + q; ++i)
      for (int j = 0; j < p + q; ++j) {
        Parity par = m.at(i, j).parity();
        if (par == Parity::zero) continue;
        bool want_odd = (i < p) != (j < p);
        if (want_odd && par != Parity::odd) return false;
        if (!want_odd && par != Parity::even) return false;
      }
    return true;
  }
};

/// Ber(M) = det(A - B D^{-1} C) det(D)^{-1} on the standard block signature
/// (even block A first).  Requires the odd-odd block D to be invertible.
template <class Body>
GrassmannElement<Body> berezinian(const SuperMatrix<Body>& sm) {
  if (sm.q == 0) return det_even(sm.m);
  if (sm.p == 0) {
    try {
      return det_even(sm.m).inverse();
    } catch (const std::domain_error&) {
      throw std::domain_error("berezinian: odd-odd block not invertible");
    }
  }
  auto a = sm.block(0, 0, sm.p, sm.p);
  auto b = sm.block(0, sm.p, sm.p, sm.q);
  auto c = sm.block(sm.p, 0, sm.q, sm.p);
  auto d = sm.block(sm.p, sm.p, sm.q, sm.q);
  GMatrix<Body> dinv;
  try {
    dinv = inverse_even(d);
  } catch (const std::domain_error&) {
    throw std::domain_error("berezinian: odd-odd block not invertible");
  }
  auto schur = a - b * (dinv * c);
  return det_even(schur) * det_even(d).inverse();
}

using GMat = GMatrix<TruncatedSeries>;

}  // namespace superperiod
