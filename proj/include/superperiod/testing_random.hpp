#pragma once

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "superperiod/grassmann.hpp"
#include "superperiod/supermatrix.hpp"
#include "superperiod/truncated_series.hpp"

namespace superperiod {

/// Deterministic random inputs for the law suites.  The seed may be pinned
/// through SUPERPERIOD_SEED so CLI suite runs are reproducible.
class test_rng {
 public:
  explicit test_rng(std::uint64_t seed) : gen_(seed) {}

  static std::uint64_t seed_from_env(std::uint64_t fallback) {
    if (const char* s = std::getenv("SUPERPERIOD_SEED")) return std::strtoull(s, nullptr, 10);
    return fallback;
  }

  double real(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(gen_);
  }
  cx complex_in_disk(double scale = 1.0) { return {scale * real(-1, 1), scale * real(-1, 1)}; }
  cx tau(double im_lo = 0.8, double im_hi = 2.5) { return {real(-0.45, 0.45), real(im_lo, im_hi)}; }
  int integer(int a, int b) {
    std::uniform_int_distribution<int> d(a, b);
    return d(gen_);
  }

  TruncatedSeries series(Var v, int order, bool unit = false) {
    TruncatedSeries s(v, order);
    for (int k = 0; k <= order; ++k) s.set_coeff(k, complex_in_disk());
    if (unit) s.set_coeff(0, s.coeff(0) + cx(2.0, 0.0));
    return s;
  }

  GElem grassmann(const std::vector<std::string>& gens, Var v, int order, bool unit = false) {
    GElem g{gens};
    for (unsigned m = 0; m < g.n_terms(); ++m) g.set_term(m, series(v, order));
    if (unit) g.set_term(0, series(v, order, true));
    return g;
  }

  /// Random homogeneous element of one parity.
  GElem homogeneous(const std::vector<std::string>& gens, Var v, int order) {
    GElem g{gens};
    bool odd = integer(0, 1) == 1;
    for (unsigned m = 0; m < g.n_terms(); ++m)
      if (static_cast<unsigned>(std::popcount(m)) % 2 == (odd ? 1u : 0u)) g.set_term(m, series(v, order));
    return g;
  }

  /// Random parity-consistent invertible supermatrix (diag-dominant blocks).
  SuperMatrix<TruncatedSeries> supermatrix(int p, int q, const std::vector<std::string>& gens, Var v,
                                           int order) {
    SuperMatrix<TruncatedSeries> sm(p, q);
    for (int i = 0; i < p + q; ++i)
      for (int j = 0; j < p + q; ++j) {
        bool odd = (i < p) != (j < p);
        GElem g{gens};
        for (unsigned m = 0; m < g.n_terms(); ++m)
          if (static_cast<unsigned>(std::popcount(m)) % 2 == (odd ? 1u : 0u))
            g.set_term(m, 0.25 * series(v, order));
        if (!odd && i == j) {
          auto t0 = g.term(0);
          t0.set_coeff(0, t0.coeff(0) + cx(2.0));
          g.set_term(0, t0);
        }
        sm.m.at(i, j) = g;
      }
    return sm;
  }

  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace superperiod
