#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "superperiod/elliptic.hpp"

namespace superperiod {

// ---------------------------------------------------------------------------
// Numerical periods of y^2 = prod_i (x - p_i) (4 or 6 branch points) by
// contour integration: cycles around branch cuts and connecting contours,
// with the square-root endpoint behavior absorbed by a u^2 substitution and
// the branch of y tracked by analytic continuation.
// ---------------------------------------------------------------------------

namespace detail_oracle {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double dp = n * (t * p0 - p1) / (t * t - 1.0);
    x[static_cast<std::size_t>(i)] = -t;
    x[static_cast<std::size_t>(n - 1 - i)] = t;
    w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

struct GLRule {
  std::vector<double> x, w;
  explicit GLRule(int n) { gauss_legendre(n, x, w); }
};

inline const GLRule& gl_rule(int n) {
  static thread_local std::vector<std::pair<int, GLRule>> cache;
  for (auto& [nn, r] : cache)
    if (nn == n) return r;
  cache.emplace_back(n, GLRule(n));
  return cache.back().second;
}

}  // namespace detail_oracle

class HyperellipticCurve {
 public:
  explicit HyperellipticCurve(std::vector<cx> pts) : pts_(std::move(pts)) {
    if (pts_.size() != 4 && pts_.size() != 6)
      throw std::invalid_argument("hyperelliptic oracle: 4 or 6 branch points");
  }

  const std::vector<cx>& points() const { return pts_; }

  cx poly(cx x) const {
    cx p = 1.0;
    for (cx e : pts_) p *= (x - e);
    return p;
  }

  /// Analytic continuation of y = sqrt(poly) from (x0, y0) to x1 along the
  /// straight path, with step halving when the phase of poly turns fast.
  cx continue_y(cx x0, cx y0, cx x1, int max_depth = 48) const {
    cx p0 = poly(x0);
    cx p1 = poly(x1);
    cx r = p1 / p0;
    if (std::abs(std::arg(r)) <= kPi / 2.0 && std::abs(r) > 0.2 && std::abs(r) < 5.0) {
      // single multiplicative sqrt step keeps the branch
      return y0 * std::sqrt(r);
    }
    if (max_depth == 0) throw std::runtime_error("branch tracking failed (too many subdivisions)");
    cx xm = 0.5 * (x0 + x1);
    cx ym = continue_y(x0, y0, xm, max_depth - 1);
    return continue_y(xm, ym, x1, max_depth - 1);
  }

 private:
  std::vector<cx> pts_;
};

namespace detail_oracle {

/// Integral of x^k dx / y over the half segment from branch point A to the
/// midpoint M, using x = A + u^2 and panels refined toward u-plane
/// singularities; G(u) = y/u is continued from the anchor at M inward.
inline cx half_segment_integral(const HyperellipticCurve& curve, cx A, cx M, int k, cx yM,
                                int order) {
  cx uM = std::sqrt(M - A);  // fixed branch; the anchor absorbs the choice
  // u-plane singular points: +-sqrt(p_i - A) for the other branch points
  std::vector<cx> sing;
  for (cx p : curve.points()) {
    if (std::abs(p - A) < 1e-15) continue;
    cx s = std::sqrt(p - A);
    sing.push_back(s);
    sing.push_back(-s);
  }
  // panel subdivision of [0, 1] (in fraction of uM) by recursive bisection
  std::vector<double> knots{0.0, 1.0};
  for (int pass = 0; pass < 60; ++pass) {
    bool split = false;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      double a = knots[i], b = knots[i + 1];
      cx ua = a * uM, ub = b * uM;
      double len = std::abs(ub - ua);
      double dist = 1e300;
      cx mid = 0.5 * (ua + ub);
      for (cx s : sing) dist = std::min(dist, std::abs(s - mid));
      if (len > 1.2 * dist && len > 1e-13 * std::abs(uM)) {
        knots.insert(knots.begin() + static_cast<std::ptrdiff_t>(i) + 1, 0.5 * (a + b));
        split = true;
        break;
      }
    }
    if (!split) break;
  }
  const auto& rule = gl_rule(order);
  // continue G = y/u from the anchor (u = uM) down through the panels
  cx G_ref = yM / uM;
  cx total = 0.0;
  for (std::size_t pi = knots.size() - 1; pi-- > 0;) {
    double a = knots[pi], b = knots[pi + 1];
    cx ua = a * uM, ub = b * uM;
    // evaluate from b down to a so the continuation reference moves inward
    cx acc = 0.0;
    for (int j = static_cast<int>(rule.x.size()) - 1; j >= 0; --j) {
      double s = rule.x[static_cast<std::size_t>(j)];
      cx u = 0.5 * (ua + ub) + 0.5 * (ub - ua) * s;
      cx x = A + u * u;
      // y at x continued from reference: G = y/u smooth and nonvanishing
      cx y2 = curve.poly(x);
      cx G2 = y2 / (u * u);
      cx G = std::sqrt(G2);
      // choose the root closest to the reference
      if (std::abs(G - G_ref) > std::abs(G + G_ref)) G = -G;
      G_ref = G;
      acc += rule.w[static_cast<std::size_t>(j)] * std::pow(x, k) / G;
    }
    total += acc * 0.5 * (ub - ua);
  }
  return 2.0 * total;  // from dx = 2 u du
}

}  // namespace detail_oracle

/// Integral of x^k dx/y from branch point A to branch point B along the
/// straight segment, with the branch anchored by y at the midpoint.
inline cx branch_segment_integral(const HyperellipticCurve& curve, cx A, cx B, int k, cx y_mid,
                                  int order) {
  cx M = 0.5 * (A + B);
  cx left = detail_oracle::half_segment_integral(curve, A, M, k, y_mid, order);
  cx right = detail_oracle::half_segment_integral(curve, B, M, k, y_mid, order);
  return left - right;  // A -> M plus M -> B
}

/// Cut/cycle data: three cuts (pairs of indices into the point list); the
/// alpha-cycles encircle cuts 0 and 1, the beta-contours connect them to
/// cut 2.  Endpoint selectors and orientation signs pin the homology basis.
struct CycleBasis {
  std::array<std::array<int, 2>, 3> cuts{};
  std::array<int, 2> beta_from{0, 0};  // endpoint index within cuts[i]
  std::array<int, 2> beta_to{0, 0};    // endpoint index within cuts[2]
  std::array<double, 2> alpha_sign{1.0, 1.0};
  std::array<double, 2> beta_sign{1.0, 1.0};
  std::array<int, 2> alpha_shift{0, 0};  // beta_i += shift * alpha_i

  /// The pinned basis for glued configurations with points ordered
  /// (a1, a2, a3, b1, b2, b3): cuts (a2, a3), (b2, b3), (a1, b1).
  static CycleBasis glued_default();
};

struct OracleResult {
  std::array<std::array<cx, 2>, 2> omega{};
  double symmetry_error = 0.0;
};

namespace detail_oracle {

/// Straight path from x0 to x1 crossing any cut segment?
inline bool segments_cross(cx a0, cx a1, cx b0, cx b1) {
  auto side = [](cx p, cx q, cx r) {
    cx d1 = q - p, d2 = r - p;
    return d1.real() * d2.imag() - d1.imag() * d2.real();
  };
  double s1 = side(a0, a1, b0), s2 = side(a0, a1, b1);
  double s3 = side(b0, b1, a0), s4 = side(b0, b1, a1);
  return (s1 * s2 < 0.0) && (s3 * s4 < 0.0);
}

inline std::vector<cx> path_avoiding_cuts(cx x0, cx x1,
                                           const std::vector<std::pair<cx, cx>>& cut_segs) {
  auto crosses = [&](cx a, cx b) {
    for (const auto& [c0, c1] : cut_segs)
      if (segments_cross(a, b, c0, c1)) return true;
    return false;
  };
  if (!crosses(x0, x1)) return {x1};
  // single perpendicular detour
  {
    cx dir = x1 - x0;
    cx perp = cx(-dir.imag(), dir.real());
    double scale = 0.5;
    for (int attempt = 0; attempt < 6; ++attempt) {
      for (double side : {1.0, -1.0}) {
        cx d = 0.5 * (x0 + x1) + side * scale * perp;
        if (!crosses(x0, d) && !crosses(d, x1)) return {d, x1};
      }
      scale *= 1.8;
    }
  }
  // radial route: out to a large circle, around, and back in at an angle
  // from which the target is reachable without crossing a cut
  double R = 1.0;
  for (const auto& [c0, c1] : cut_segs) R = std::max({R, std::abs(c0), std::abs(c1)});
  R = 3.0 * R + std::abs(x0) + std::abs(x1);
  cx out0 = x0 / std::abs(x0 == cx(0.0) ? cx(1.0) : x0) * R;
  if (crosses(x0, out0)) {
    // leave in a rotated direction instead
    for (int rot = 1; rot < 16; ++rot) {
      cx cand = std::exp(cx(0, 2.0 * kPi * rot / 16.0)) * out0;
      if (!crosses(x0, cand)) {
        out0 = cand;
        break;
      }
    }
  }
  for (int rot = 0; rot < 32; ++rot) {
    double theta = std::arg(x1 == cx(0.0) ? cx(1.0) : x1) + 2.0 * kPi * rot / 32.0;
    cx in1 = std::polar(R, theta);
    if (crosses(in1, x1)) continue;
    // arc from out0 to in1 in short steps (chords stay outside all cuts)
    std::vector<cx> path;
    double th0 = std::arg(out0), th1 = theta;
    double d = th1 - th0;
    while (d > kPi) d -= 2.0 * kPi;
    while (d < -kPi) d += 2.0 * kPi;
    const int steps = 16;
    bool ok = !crosses(x0, out0);
    path.push_back(out0);
    for (int sstep = 1; sstep <= steps; ++sstep) {
      cx nxt = std::polar(R, th0 + d * sstep / steps);
      if (crosses(path.back(), nxt)) {
        ok = false;
        break;
      }
      path.push_back(nxt);
    }
    if (!ok) continue;
    if (crosses(path.back(), in1)) continue;
    path.push_back(in1);
    path.push_back(x1);
    return path;
  }
  throw std::runtime_error("period oracle: could not route around the branch cuts");
}

inline cx continue_avoiding_cuts(const HyperellipticCurve& curve, cx x0, cx y0, cx x1,
                                 const std::vector<std::pair<cx, cx>>& cut_segs) {
  cx x = x0, y = y0;
  for (cx next : path_avoiding_cuts(x0, x1, cut_segs)) {
    y = curve.continue_y(x, y, next);
    x = next;
  }
  return y;
}

}  // namespace detail_oracle



/// Integral of x^k dx/y along the straight leg [a, b] with no branch point
/// on the leg; panels are refined toward nearby branch points, the branch
/// continues from y_a.  Returns the integral and the branch value at b.
inline std::pair<cx, cx> leg_integral(const HyperellipticCurve& curve, cx a, cx b, int k, cx y_a,
                                      int order) {
  std::vector<double> knots{0.0, 1.0};
  for (int pass = 0; pass < 80; ++pass) {
    bool split = false;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      cx pa = a + knots[i] * (b - a), pb = a + knots[i + 1] * (b - a);
      double len = std::abs(pb - pa);
      cx mid = 0.5 * (pa + pb);
      double dist = 1e300;
      for (cx p : curve.points()) dist = std::min(dist, std::abs(p - mid));
      if (len > 1.0 * dist && len > 1e-14 * std::abs(b - a)) {
        knots.insert(knots.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                     0.5 * (knots[i] + knots[i + 1]));
        split = true;
        break;
      }
    }
    if (!split) break;
  }
  const auto& rule = detail_oracle::gl_rule(order);
  cx total = 0.0;
  cx y_ref = y_a;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    cx pa = a + knots[i] * (b - a), pb = a + knots[i + 1] * (b - a);
    cx acc = 0.0;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      cx x = 0.5 * (pa + pb) + 0.5 * (pb - pa) * rule.x[j];
      cx y = std::sqrt(curve.poly(x));
      if (std::abs(y - y_ref) > std::abs(y + y_ref)) y = -y;
      y_ref = y;
      acc += rule.w[j] * std::pow(x, k) / y;
    }
    total += acc * 0.5 * (pb - pa);
  }
  cx y_b = std::sqrt(curve.poly(b));
  if (std::abs(y_b - y_ref) > std::abs(y_b + y_ref)) y_b = -y_b;
  return {total, y_b};
}

/// Gateway point next to a branch point P, chosen among several directions
/// to maximize clearance from the other branch points.
inline cx endpoint_gateway(const HyperellipticCurve& curve, cx P, cx toward, double scale) {
  cx dir = (toward - P) / std::abs(toward - P);
  std::array<cx, 6> cands;
  cx rot = std::exp(cx(0, kPi / 4.0));
  cands[0] = dir;
  cands[1] = dir * rot;
  cands[2] = dir / rot;
  cands[3] = dir * rot * rot;
  cands[4] = dir / (rot * rot);
  cands[5] = -dir;
  double best = -1.0;
  cx bestw = P + scale * dir;
  for (cx c : cands) {
    cx w = P + scale * c;
    double clear = 1e300;
    for (cx p : curve.points()) {
      if (std::abs(p - P) < 1e-15) continue;
      // distance from p to the segment [P, w], padded
      cx d = w - P;
      double t = std::clamp((std::conj(d) * (p - P)).real() / std::norm(d), 0.0, 1.0);
      clear = std::min(clear, std::abs(p - (P + t * d)));
    }
    if (clear > best) {
      best = clear;
      bestw = w;
    }
  }
  return bestw;
}

/// Integral of x^k dx/y from branch point P to branch point Q along a
/// contour routed around the cuts; the branch starts from the anchored
/// value at the P-side gateway and stays continuous along the whole path.
inline cx routed_connector_integral(const HyperellipticCurve& curve, cx P, cx Q, int k, cx x0,
                                    cx y0, const std::vector<std::pair<cx, cx>>& cut_segs,
                                    int order) {
  double dPother = 1e300, dQother = 1e300;
  for (cx p : curve.points()) {
    if (std::abs(p - P) > 1e-15) dPother = std::min(dPother, std::abs(p - P));
    if (std::abs(p - Q) > 1e-15) dQother = std::min(dQother, std::abs(p - Q));
  }
  double sep = std::abs(Q - P);
  cx GP = endpoint_gateway(curve, P, Q, 0.45 * std::min(sep, dPother));
  cx GQ = endpoint_gateway(curve, Q, P, 0.45 * std::min(sep, dQother));
  cx yGP = detail_oracle::continue_avoiding_cuts(curve, x0, y0, GP, cut_segs);
  // singular end at P: x = P + u^2 toward GP
  cx I_P = detail_oracle::half_segment_integral(curve, P, GP, k, yGP, order);
  // routed interior legs
  cx total = I_P;
  cx x = GP, y = yGP;
  for (cx next : detail_oracle::path_avoiding_cuts(GP, GQ, cut_segs)) {
    auto [val, ynext] = leg_integral(curve, x, next, k, y, order);
    total += val;
    x = next;
    y = ynext;
  }
  // singular end at Q: subtract the inward half-segment
  cx I_Q = detail_oracle::half_segment_integral(curve, Q, GQ, k, y, order);
  return total - I_Q;
}

inline cx anchored_midpoint_branch(const HyperellipticCurve& curve, cx x0, cx y0, cx A, cx B,
                                   const std::vector<std::pair<cx, cx>>& cut_segs) {
  cx mid = 0.5 * (A + B);
  cx dir = (B - A) / std::abs(B - A);
  cx nhat = cx(0, 1) * dir;
  double dother = 1e300;
  for (const auto& [c0, c1] : cut_segs)
    for (cx p : {c0, c1}) {
      double d = std::abs(p - mid);
      if (d > 1e-15) dother = std::min(dother, d);
    }
  double d_gate = 0.5 * std::min(std::abs(B - A), 1.2 * dother);
  // fixed gateway side so the sheet choice is stable across nearby
  // configurations (the subdivision machinery absorbs mere proximity)
  cx W = mid + d_gate * nhat;
  cx yW = detail_oracle::continue_avoiding_cuts(curve, x0, y0, W, cut_segs);
  return curve.continue_y(W, yW, mid);
}

/// Classical period matrix: integrate dx/y and x dx/y over the basis cycles,
/// normalize the alpha-periods, return the beta-period matrix.
inline OracleResult hyperelliptic_periods(const std::vector<cx>& pts, const CycleBasis& cb,
                                          int quad_order = 128) {
  HyperellipticCurve curve(pts);
  if (pts.size() != 6) throw std::invalid_argument("genus-2 oracle needs 6 points");
  std::vector<std::pair<cx, cx>> cut_segs;
  for (const auto& c : cb.cuts)
    cut_segs.push_back({pts[static_cast<std::size_t>(c[0])], pts[static_cast<std::size_t>(c[1])]});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      if (detail_oracle::segments_cross(cut_segs[i].first, cut_segs[i].second, cut_segs[j].first,
                                        cut_segs[j].second))
        throw std::domain_error("period oracle: crossing branch cuts");

  // base point and global branch anchor: centroid pushed off the real axis
  cx x0 = 0.0;
  for (cx p : pts) x0 += p;
  x0 /= 6.0;
  x0 += cx(0.137, 0.219) * (std::abs(pts[0] - x0) + 1.0);
  cx y0 = std::sqrt(curve.poly(x0));

  auto anchored_integral = [&](cx A, cx B, int k) {
    cx ymid = anchored_midpoint_branch(curve, x0, y0, A, B, cut_segs);
    return branch_segment_integral(curve, A, B, k, ymid, quad_order);
  };

  // periods of omega_k over alpha_i (around cuts 0, 1) and beta_i
  std::array<std::array<cx, 2>, 2> A{}, B{};
  for (int i = 0; i < 2; ++i) {
    cx P = pts[static_cast<std::size_t>(cb.cuts[static_cast<std::size_t>(i)][0])];
    cx Q = pts[static_cast<std::size_t>(cb.cuts[static_cast<std::size_t>(i)][1])];
    for (int k = 0; k < 2; ++k)
      A[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
          cb.alpha_sign[static_cast<std::size_t>(i)] * 2.0 * anchored_integral(P, Q, k);
    cx E = pts[static_cast<std::size_t>(
        cb.cuts[static_cast<std::size_t>(i)][static_cast<std::size_t>(cb.beta_from[static_cast<std::size_t>(i)])])];
    cx F = pts[static_cast<std::size_t>(
        cb.cuts[2][static_cast<std::size_t>(cb.beta_to[static_cast<std::size_t>(i)])])];
    for (int k = 0; k < 2; ++k)
      B[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
          cb.beta_sign[static_cast<std::size_t>(i)] * 2.0 *
              routed_connector_integral(curve, E, F, k, x0, y0, cut_segs, quad_order) +
          static_cast<double>(cb.alpha_shift[static_cast<std::size_t>(i)]) *
              A[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }

  // Omega = B A^{-1}
  cx det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  if (std::abs(det) < 1e-300) throw std::domain_error("period oracle: degenerate alpha periods");
  std::array<std::array<cx, 2>, 2> Ainv{{{A[1][1] / det, -A[0][1] / det},
                                         {-A[1][0] / det, A[0][0] / det}}};
  OracleResult r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cx acc = 0.0;
      for (int k = 0; k < 2; ++k)
        acc += B[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
               Ainv[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      r.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
    }
  // Marking coherence: the raw contours fix the cycles only up to
  // orientation and integer alpha-windings of the connectors.  Repair
  // deterministically: beta-orientations from Im Omega_ii > 0, then remove
  // the integer off-diagonal winding defect.  (Explicitly pinned bases,
  // e.g. for glued families, come out already coherent and are untouched.)
  double scale = 0.0;
  for (auto& row : r.omega)
    for (auto& v : row) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1e-30);
  for (int i = 0; i < 2; ++i)
    if (r.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)].imag() < 0.0)
      for (int j = 0; j < 2; ++j)
        r.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            -r.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  cx defect = r.omega[0][1] - r.omega[1][0];
  double n = std::round(defect.real());
  if (std::abs(defect - n) < 1e-5 * std::max(scale, 1.0) && n != 0.0) r.omega[0][1] -= n;
  r.symmetry_error = std::abs(r.omega[0][1] - r.omega[1][0]) / scale;
  if (r.symmetry_error > 1e-5)
    throw std::runtime_error("period oracle: non-symmetric result (branch tracking error)");
  return r;
}

/// Genus-1 flavor: 4 points, cuts (p0, p1) and (p2, p3); returns the
/// normalized beta-period (the modulus tau of the curve).
inline cx elliptic_period(const std::vector<cx>& pts, int quad_order = 128) {
  HyperellipticCurve curve(pts);
  if (pts.size() != 4) throw std::invalid_argument("genus-1 oracle needs 4 points");
  std::vector<std::pair<cx, cx>> cut_segs{{pts[0], pts[1]}, {pts[2], pts[3]}};
  cx x0 = 0.25 * (pts[0] + pts[1] + pts[2] + pts[3]) + cx(0.171, 0.233);
  cx y0 = std::sqrt(curve.poly(x0));
  auto anchored_integral = [&](cx A, cx B, int k) {
    cx ymid = anchored_midpoint_branch(curve, x0, y0, A, B, cut_segs);
    return branch_segment_integral(curve, A, B, k, ymid, quad_order);
  };
  cx a_per = 2.0 * anchored_integral(pts[0], pts[1], 0);
  cx b_per = 2.0 * routed_connector_integral(curve, pts[1], pts[2], 0, x0, y0, cut_segs, quad_order);
  cx tau = b_per / a_per;
  if (tau.imag() < 0) tau = -tau;
  return tau + 1.0;  // pinned marking: matches the modulus of (0,1/e1|1/e2,1/e3)
}

/// Adaptive flavor: double the quadrature order until the result moves by
/// less than `tol`, starting from `order0`.
inline OracleResult hyperelliptic_periods_adaptive(const std::vector<cx>& pts, const CycleBasis& cb,
                                                   double tol = 1e-9, int order0 = 32,
                                                   int max_order = 512) {
  OracleResult prev = hyperelliptic_periods(pts, cb, order0);
  for (int order = 2 * order0; order <= max_order; order *= 2) {
    OracleResult cur = hyperelliptic_periods(pts, cb, order);
    double delta = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        delta = std::max(delta, std::abs(cur.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                         prev.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    prev = cur;
    if (delta < tol) return prev;
  }
  return prev;
}

inline CycleBasis CycleBasis::glued_default() {
  CycleBasis cb;
  cb.cuts = {{{1, 2}, {4, 5}, {0, 3}}};
  cb.beta_from = {0, 0};
  cb.beta_to = {0, 1};  // beta_2 attaches at the near endpoint b_1
  cb.alpha_sign = {1.0, -1.0};
  cb.beta_sign = {1.0, 1.0};
  cb.alpha_shift = {1, 1};
  return cb;
}

// ---------------------------------------------------------------------------
// Logarithmic degeneration probe: merge one pair of branch points and fit
// the growth of Omega_11 against log(gap).
// ---------------------------------------------------------------------------

struct LogProbeResult {
  double k_fitted = 0.0;          // Omega_11 ~ (k / 2 pi i) log(gap)
  double fit_residual = 0.0;      // deviation between successive increments
  double offdiag_drift = 0.0;     // max drift of the other entries
  std::vector<cx> omega11;        // the swept values
};

/// `base` has six points; the merging pair is pts[m0], pts[m1], moved to
/// midpoint +- gap/2 along their separation direction.  The merging pair is
/// cut 0, so it sits inside the first alpha-cycle.
inline LogProbeResult degeneration_log_probe(const std::vector<cx>& base, int m0, int m1,
                                             const std::vector<double>& gaps,
                                             int quad_order = 128) {
  if (base.size() != 6) throw std::invalid_argument("log probe needs 6 points");
  cx center = 0.5 * (base[static_cast<std::size_t>(m0)] + base[static_cast<std::size_t>(m1)]);
  cx dir = (base[static_cast<std::size_t>(m1)] - base[static_cast<std::size_t>(m0)]);
  dir /= std::abs(dir);

  // order the points with the merging pair first, then the rest
  std::vector<int> rest;
  for (int i = 0; i < 6; ++i)
    if (i != m0 && i != m1) rest.push_back(i);

  CycleBasis cb;
  cb.cuts = {{{0, 1}, {2, 3}, {4, 5}}};
  cb.beta_from = {0, 0};
  cb.beta_to = {0, 0};

  LogProbeResult out;
  std::vector<std::array<cx, 3>> others;
  for (double g : gaps) {
    std::vector<cx> pts{center - 0.5 * g * dir, center + 0.5 * g * dir};
    for (int i : rest) pts.push_back(base[static_cast<std::size_t>(i)]);
    auto res = hyperelliptic_periods(pts, cb, quad_order);
    out.omega11.push_back(res.omega[0][0]);
    others.push_back({res.omega[0][1], res.omega[1][0], res.omega[1][1]});
  }
  // increments between consecutive gaps: (k / 2 pi i) log(gap ratio)
  std::vector<double> ks;
  for (std::size_t i = 0; i + 1 < out.omega11.size(); ++i) {
    cx dOm = out.omega11[i + 1] - out.omega11[i];
    double logratio = std::log(gaps[i + 1] / gaps[i]);
    ks.push_back((dOm * kTwoPiI / logratio).real());
  }
  double kavg = 0.0;
  for (double k : ks) kavg += k;
  kavg /= static_cast<double>(ks.size());
  out.k_fitted = kavg;
  for (double k : ks) out.fit_residual = std::max(out.fit_residual, std::abs(k - kavg));
  for (std::size_t i = 1; i < others.size(); ++i)
    for (int j = 0; j < 3; ++j)
      out.offdiag_drift = std::max(out.offdiag_drift,
                                   std::abs(others[i][static_cast<std::size_t>(j)] -
                                            others[0][static_cast<std::size_t>(j)]));
  return out;
}

}  // namespace superperiod
