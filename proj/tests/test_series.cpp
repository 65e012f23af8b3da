#include <catch2/catch_amalgamated.hpp>

#include "superperiod/jet.hpp"
#include "superperiod/truncated_series.hpp"

#include <random>

using namespace superperiod;

namespace {
std::mt19937_64& rng() {
  static std::mt19937_64 g(20240517);
  return g;
}
cx rand_cx(double scale = 1.0) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  return scale * cx(d(rng()), d(rng()));
}
TruncatedSeries rand_series(Var v, int order, bool unit = false) {
  TruncatedSeries s(v, order);
  for (int k = 0; k <= order; ++k) s.set_coeff(k, rand_cx());
  if (unit) s.set_coeff(0, s.coeff(0) + cx(2.0));
  return s;
}
}  // namespace

TEST_CASE("arithmetic respects truncation and commutativity") {
  for (int it = 0; it < 200; ++it) {
    auto a = rand_series(Var::t, 6);
    auto b = rand_series(Var::t, 6);
    auto c = rand_series(Var::t, 6);
    REQUIRE(series_rel_dist(a * b, b * a) < 1e-14);
    REQUIRE(series_rel_dist((a * b) * c, a * (b * c)) < 1e-13);
    REQUIRE(series_rel_dist((a + b) * c, a * c + b * c) < 1e-13);
  }
}

TEST_CASE("mixing variables or orders is an error") {
  TruncatedSeries a(Var::t, 4), b(Var::q, 4), c(Var::t, 5);
  a.set_coeff(0, 1.0);
  b.set_coeff(0, 1.0);
  c.set_coeff(0, 1.0);
  REQUIRE_THROWS_AS(a * b, std::invalid_argument);
  REQUIRE_THROWS_AS(a + c, std::invalid_argument);
}

TEST_CASE("inverse is two-sided up to truncation") {
  for (int it = 0; it < 100; ++it) {
    auto a = rand_series(Var::q, 8, true);
    auto inv = a.inverse();
    auto one = TruncatedSeries::constant(Var::q, 8, 1.0);
    REQUIRE(series_rel_dist(a * inv, one) < 1e-13);
    REQUIRE(series_rel_dist(inv * a, one) < 1e-13);
  }
}

TEST_CASE("inverse of 2 + t by long division") {
  // 1/(2+t) = 1/2 - t/4 + t^2/8 - ...
  TruncatedSeries a(Var::t, 5);
  a.set_coeff(0, 2.0);
  a.set_coeff(1, 1.0);
  auto inv = a.inverse();
  for (int k = 0; k <= 5; ++k) {
    double expect = std::pow(-1.0, k) / std::pow(2.0, k + 1);
    REQUIRE(std::abs(inv.coeff(k) - cx(expect)) < 1e-15);
  }
}

TEST_CASE("zero constant term is not invertible") {
  TruncatedSeries a(Var::t, 3);
  REQUIRE_THROWS_AS(a.inverse(), std::domain_error);
}

TEST_CASE("sqrt squares back") {
  for (int it = 0; it < 100; ++it) {
    auto a = rand_series(Var::t, 8, true);
    for (int branch : {+1, -1}) {
      auto r = a.sqrt(branch);
      REQUIRE(series_rel_dist(r * r, a) < 1e-13);
    }
  }
  // 4 + 4t -> 2 sqrt(1+t) = 2 + t - t^2/4 + ... (squares back to 4 + 4t)
  TruncatedSeries a(Var::t, 4);
  a.set_coeff(0, 4.0);
  a.set_coeff(1, 4.0);
  auto r = a.sqrt();
  REQUIRE(std::abs(r.coeff(0) - cx(2.0)) < 1e-15);
  REQUIRE(std::abs(r.coeff(1) - cx(1.0)) < 1e-15);
  REQUIRE(std::abs(r.coeff(2) - cx(-0.25)) < 1e-15);
  REQUIRE(series_rel_dist(r * r, a) < 1e-15);
}

TEST_CASE("principal parts: shifted inverses") {
  // a = t^2 (3 + t): inverse should be t^{-2}/3 - t^{-1}/9 + ...
  TruncatedSeries a(Var::t, 5);
  a.set_coeff(2, 3.0);
  a.set_coeff(3, 1.0);
  auto inv = a.inverse();
  REQUIRE(inv.lo() == -2);
  // the inverse of t^2 u is only determined mod t^{order - 2*2}; check there
  auto prod = a * inv;
  REQUIRE(std::abs(prod.coeff(0) - cx(1.0)) < 1e-15);
  for (int k = 1; k <= 3; ++k) REQUIRE(std::abs(prod.coeff(k)) < 1e-15);
}

TEST_CASE("monomial substitution implements q = -t^2") {
  // s(q) = 1 + q + q^2 -> 1 - t^2 + t^4
  TruncatedSeries s(Var::q, 2);
  s.set_coeff(0, 1.0);
  s.set_coeff(1, 1.0);
  s.set_coeff(2, 1.0);
  auto t = s.substitute_monomial(Var::t, 5, cx(-1.0), 2);
  REQUIRE(std::abs(t.coeff(0) - cx(1.0)) < 1e-15);
  REQUIRE(std::abs(t.coeff(2) - cx(-1.0)) < 1e-15);
  REQUIRE(std::abs(t.coeff(4) - cx(1.0)) < 1e-15);
  REQUIRE(std::abs(t.coeff(1)) == 0.0);
}

TEST_CASE("jets differentiate products and quotients") {
  Jet3 x(cx(1.3, 0.2), cx(1.0), cx(0.0));
  Jet3 y(cx(0.4, -0.7), cx(0.0), cx(1.0));
  auto p = x * y;
  REQUIRE(std::abs(p.d1 - y.v) < 1e-15);
  REQUIRE(std::abs(p.d2 - x.v) < 1e-15);
  auto q = x / y;
  REQUIRE(std::abs(q.d1 - 1.0 / y.v) < 1e-15);
  REQUIRE(std::abs(q.d2 + x.v / (y.v * y.v)) < 1e-14);
  auto r = scalar_sqrt(x);
  REQUIRE(std::abs(r.v * r.v - x.v) < 1e-15);
  REQUIRE(std::abs(r.d1 - 0.5 / r.v) < 1e-15);
}

TEST_CASE("series evaluation matches horner on laurent window") {
  TruncatedSeries s(Var::t, 4);
  s.set_coeff(-1, cx(2.0));
  s.set_coeff(0, cx(1.0));
  s.set_coeff(3, cx(-1.0));
  cx x(0.3, 0.1);
  cx expect = 2.0 / x + 1.0 - std::pow(x, 3);
  REQUIRE(std::abs(s.evaluate(x) - expect) < 1e-14);
}
