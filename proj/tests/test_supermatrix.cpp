#include <catch2/catch_amalgamated.hpp>

#include "superperiod/supermatrix.hpp"
#include "superperiod/testing_random.hpp"

using namespace superperiod;

namespace {
GElem sc(const TruncatedSeries& s) { return GElem::scalar(gens_eta2(), s); }
GElem num(cx v, Var var = Var::t, int order = 4) {
  return sc(TruncatedSeries::constant(var, order, v));
}
}  // namespace

TEST_CASE("2x2 determinant equals cofactor expansion, identity gives 1") {
  GMat id(2, 2);
  id.at(0, 0) = num(1.0);
  id.at(1, 1) = num(1.0);
  REQUIRE(grassmann_rel_dist(det_even(id), num(1.0)) == 0.0);

  test_rng rng(3);
  for (int it = 0; it < 200; ++it) {
    GMat a(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) a.at(i, j) = rng.grassmann(gens_eta2(), Var::t, 4);
    // even entries only so det is unambiguous; project to even part
    for (auto& e : a.e) {
      GElem ev{gens_eta2()};
      for (unsigned m = 0; m < e.n_terms(); ++m)
        if (std::popcount(m) % 2 == 0) ev.set_term(m, e.term(m));
      e = ev;
    }
    auto direct = a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
    REQUIRE(grassmann_rel_dist(det_even(a), direct) < 1e-14);
    REQUIRE(grassmann_rel_dist(det2_pairing(a, a), 2.0 * det_even(a)) < 1e-13);
  }
}

TEST_CASE("nilpotent-direction determinant expansion") {
  // det(A + B1 e1 + B2 e2) = det A + <A,B1> e1 + <A,B2> e2 + <B1,B2> e1 e2
  // with e1 = eta1 eta2, e2 = etat1 etat2.
  test_rng rng(5);
  auto one = TruncatedSeries::constant(Var::t, 4, 1.0);
  auto eps1 = GElem::generator(gens_eta4(), "eta1", one) * GElem::generator(gens_eta4(), "eta2", one);
  auto eps2 = GElem::generator(gens_eta4(), "etat1", one) * GElem::generator(gens_eta4(), "etat2", one);
  for (int it = 0; it < 100; ++it) {
    GMatrix<TruncatedSeries> a(2, 2), b1(2, 2), b2(2, 2), m(2, 2);
    auto scal = [&](cx v) {
      return GElem::scalar(gens_eta4(), TruncatedSeries::constant(Var::t, 4, v));
    };
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        a.at(i, j) = scal(rng.complex_in_disk());
        b1.at(i, j) = scal(rng.complex_in_disk());
        b2.at(i, j) = scal(rng.complex_in_disk());
        m.at(i, j) = a.at(i, j) + b1.at(i, j) * eps1 + b2.at(i, j) * eps2;
      }
    auto expansion = det_even(a) + det2_pairing(a, b1) * eps1 + det2_pairing(a, b2) * eps2 +
                     det2_pairing(b1, b2) * eps1 * eps2;
    REQUIRE(grassmann_rel_dist(det_even(m), expansion) < 1e-13);
  }
}

TEST_CASE("berezinian of block-diagonal identity is 1") {
  SuperMatrix<TruncatedSeries> sm(3, 2);
  for (int i = 0; i < 5; ++i) sm.m.at(i, i) = num(1.0, Var::t, 2);
  REQUIRE(sm.parity_consistent());
  REQUIRE(grassmann_rel_dist(berezinian(sm), num(1.0, Var::t, 2)) == 0.0);
}

TEST_CASE("berezinian requires invertible odd-odd block") {
  SuperMatrix<TruncatedSeries> sm(1, 1);
  sm.m.at(0, 0) = num(1.0);
  REQUIRE_THROWS_AS(berezinian(sm), std::domain_error);
}

TEST_CASE("berezinian is multiplicative") {
  test_rng rng(17);
  for (int it = 0; it < 60; ++it) {
    int p = rng.integer(1, 2), q = rng.integer(1, 2);
    auto m1 = rng.supermatrix(p, q, gens_eta4(), Var::t, 3);
    auto m2 = rng.supermatrix(p, q, gens_eta4(), Var::t, 3);
    REQUIRE(m1.parity_consistent());
    SuperMatrix<TruncatedSeries> prod(p, q);
    prod.m = m1.m * m2.m;
    auto lhs = berezinian(prod);
    auto rhs = berezinian(m1) * berezinian(m2);
    REQUIRE(grassmann_rel_dist(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("berezinian of the separating-node comparison matrix is -t^2") {
  // Five-by-five with three even and two odd rows/columns; odd-odd block
  // diag(-1/t, 1/t), odd-even entries eta/t, arbitrary entries in the third
  // column.  The Berezinian collapses to det(A) det(D)^{-1} = -t^2.
  auto gens = gens_eta2();
  const int order = 4;
  auto ts_zero = TruncatedSeries(Var::t, order);
  auto one = TruncatedSeries::constant(Var::t, order, 1.0);
  auto inv_t = TruncatedSeries::monomial(Var::t, order, -1, 1.0);
  auto eta_over_2pit = [&](const char* g, double sign) {
    return GElem::generator(gens, g, sign * (1.0 / kTwoPiI) * inv_t);
  };
  test_rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    SuperMatrix<TruncatedSeries> sm(3, 2);
    for (int i = 0; i < 3; ++i) sm.m.at(i, i) = GElem::scalar(gens, one);
    // unknown-but-irrelevant third-column entries (even rows: even parity,
    // odd rows: odd parity)
    sm.m.at(0, 2) = GElem::scalar(gens, rng.series(Var::t, order));
    sm.m.at(1, 2) = GElem::scalar(gens, rng.series(Var::t, order));
    sm.m.at(3, 2) = GElem::generator(gens, "eta1", rng.series(Var::t, order));
    sm.m.at(4, 2) = GElem::generator(gens, "eta2", rng.series(Var::t, order));
    sm.m.at(3, 0) = eta_over_2pit("eta1", +1.0);
    sm.m.at(4, 1) = eta_over_2pit("eta2", -1.0);
    sm.m.at(3, 3) = GElem::scalar(gens, -inv_t);
    sm.m.at(4, 4) = GElem::scalar(gens, inv_t);
    for (auto& e : sm.m.e)
      if (!e.shaped()) e = GElem::scalar(gens, ts_zero);
    REQUIRE(sm.parity_consistent());
    auto ber = berezinian(sm);
    auto expect = GElem::scalar(gens, TruncatedSeries::monomial(Var::t, order, 2, -1.0));
    REQUIRE(grassmann_rel_dist(ber, expect) < 1e-14);
  }
}
