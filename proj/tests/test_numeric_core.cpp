#include "doctest.h"

#include <random>

#include "recurpade/roots.hpp"
#include "test_util.hpp"

using namespace recurpade;

namespace {

// independent long-division oracle, kept separate from the library path
std::vector<CxQ> long_division_oracle(const Polynomial<Rational>& num, const Polynomial<Rational>& den,
                                      int N) {
  std::vector<CxQ> f(static_cast<std::size_t>(N) + 1);
  std::vector<CxQ> rem(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) rem[static_cast<std::size_t>(i)] = num.coeff(i);
  for (int n = 0; n <= N; ++n) {
    CxQ c = rem[static_cast<std::size_t>(n)] / den.coeff(0);
    f[static_cast<std::size_t>(n)] = c;
    for (int k = 0; k + n <= N && k <= den.degree(); ++k)
      rem[static_cast<std::size_t>(n + k)] -= c * den.coeff(k);
  }
  return f;
}

}  // namespace

TEST_CASE("scalar parsing and exact complex arithmetic") {
  CHECK(parse_rational("3/4") == Rational(3) / 4);
  CHECK(parse_rational("-1.25") == Rational(-5) / 4);
  CHECK(parse_rational("2.5e-3") == Rational(1) / 400);
  CHECK(parse_rational("1e3") == Rational(1000));
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK(format_real(parse_rational("-0.5")) == "-1/2");
  CHECK(parse_real<BigFloat>("1/4") == BigFloat("0.25"));
}

TEST_CASE("complex field operations are exact for rationals") {
  CxQ a = cq("1/2", "1/3"), b = cq("-2/5", "1/7");
  CxQ prod = a * b;
  // (1/2 + i/3)(-2/5 + i/7) = (-1/5 - 1/21) + i(1/14 - 2/15)
  CHECK(prod == cq("-26/105", "-13/210"));
  CxQ quot = prod / b;
  CHECK(quot == a);
  CHECK((a - a).is_zero());
  CHECK(a.conj() == cq("1/2", "-1/3"));
  CHECK(a.norm() == parse_rational("13/36"));
}

TEST_CASE("precision context invariants") {
  PrecisionContext exact = PrecisionContext::exact_rational();
  CHECK(exact.exact());
  CHECK(exact.zero_threshold() == 0);
  PrecisionContext bf = PrecisionContext::big_float(256);
  CHECK(bf.float_precision_bits() == 256);
  CHECK(bf.zero_threshold() > 0);
  CHECK(bf.zero_threshold() < 1e-20);
  CHECK_THROWS_AS(PrecisionContext::big_float(32), std::invalid_argument);
}

TEST_CASE("series_from_rational") {
  SUBCASE("geometric series") {
    auto f = series_from_rational(poly<Q>({"1"}), poly<Q>({"1", "-2"}), 3);
    CHECK(f.coeffs == scalars<Q>({"1", "2", "4", "8"}));
  }
  SUBCASE("identity denominator") {
    auto f = series_from_rational(poly<Q>({"1"}), poly<Q>({"1"}), 2);
    CHECK(f.coeffs == scalars<Q>({"1", "0", "0"}));
  }
  SUBCASE("(1+2z)/(1-4z^2) telescopes to 1/(1-2z)") {
    Polynomial<Rational> num = poly<Q>({"1", "2"}), den = poly<Q>({"1", "0", "-4"});
    auto f = series_from_rational(num, den, 4);
    auto oracle = long_division_oracle(num, den, 4);
    CHECK(f.coeffs == oracle);
    CHECK(f.coeffs == scalars<Q>({"1", "2", "4", "8", "16"}));
  }
  SUBCASE("denominator vanishing at the origin is rejected") {
    CHECK_THROWS_AS(series_from_rational(poly<Q>({"1"}), poly<Q>({"0", "1"}), 3), ComputeError);
  }
}

TEST_CASE("series_poly_mul") {
  auto f = PowerSeries<Rational>(scalars<Q>({"1", "2", "4", "8"}));
  SUBCASE("telescoping product") {
    auto g = series_poly_mul(f, poly<Q>({"1", "-2"}));
    CHECK(g.coeffs == scalars<Q>({"1", "0", "0", "0"}));
  }
  SUBCASE("identity") {
    auto g = series_poly_mul(f, poly<Q>({"1"}));
    CHECK(g.coeffs == f.coeffs);
  }
  SUBCASE("shift by z") {
    auto h = PowerSeries<Rational>(scalars<Q>({"1", "1", "1"}));
    auto g = series_poly_mul(h, poly<Q>({"0", "1"}));
    CHECK(g.coeffs == scalars<Q>({"0", "1", "1"}));
  }
}

TEST_CASE("exact rational round-trip: series * denominator = numerator") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num_digit(-9, 9);
  for (int trial = 0; trial < 50; ++trial) {
    int dn = 1 + trial % 3, dd = 1 + (trial / 3) % 3;
    std::vector<CxQ> nc, dc;
    for (int i = 0; i <= dn; ++i) nc.push_back(cq(std::to_string(num_digit(rng))));
    dc.push_back(cq(std::to_string(1 + (trial % 5))));  // den(0) != 0
    for (int i = 1; i <= dd; ++i) dc.push_back(cq(std::to_string(num_digit(rng))));
    Polynomial<Rational> num(std::move(nc)), den(std::move(dc));
    int N = 14;
    auto f = series_from_rational(num, den, N);
    auto back = series_poly_mul(f, den);
    for (int i = 0; i <= N; ++i) CHECK(back.coeff(i) == num.coeff(i));
  }
}

TEST_CASE("poly_deflate_linear") {
  SUBCASE("z^2-5z+6 by (z-2)") {
    auto [q, r] = poly_deflate_linear(poly<Q>({"6", "-5", "1"}), cq("2"));
    CHECK(q == poly<Q>({"-3", "1"}));
    CHECK(r.is_zero());
  }
  SUBCASE("z by (z-0)") {
    auto [q, r] = poly_deflate_linear(poly<Q>({"0", "1"}), cq("0"));
    CHECK(q == poly<Q>({"1"}));
    CHECK(r.is_zero());
  }
  SUBCASE("z^2+1 by (z-1) leaves remainder 2") {
    auto [q, r] = poly_deflate_linear(poly<Q>({"1", "0", "1"}), cq("1"));
    CHECK(q == poly<Q>({"1", "1"}));
    CHECK(r == cq("2"));
  }
  SUBCASE("reconstruction property: q*(z-lambda) + r = p") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> digit(-6, 6);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<CxQ> pc;
      int deg = 1 + trial % 4;
      for (int i = 0; i < deg; ++i) pc.push_back(cq(std::to_string(digit(rng))));
      pc.push_back(cq(std::to_string(1 + (trial % 4))));
      Polynomial<Rational> p(std::move(pc));
      CxQ lam = cq(std::to_string(digit(rng)), std::to_string(digit(rng)));
      auto [q, r] = poly_deflate_linear(p, lam);
      Polynomial<Rational> rebuilt =
          q * Polynomial<Rational>(std::vector<CxQ>{-lam, cq("1")}) + Polynomial<Rational>::constant(r);
      CHECK(rebuilt == p);
    }
  }
}

TEST_CASE("poly_roots") {
  PrecisionContext ctx = PrecisionContext::exact_rational();
  SUBCASE("1 - 5z + 6z^2: exact roots 1/2 and 1/3") {
    RootSet rs = poly_roots(poly<Q>({"1", "-5", "6"}), ctx);
    REQUIRE(rs.roots.size() == 2);
    CHECK(rs.roots[0].exact.has_value());
    CHECK(rs.roots[1].exact.has_value());
    CHECK(*rs.roots[0].exact == cq("1/3"));
    CHECK(*rs.roots[1].exact == cq("1/2"));
    CHECK(rs.residual_bound == 0);
  }
  SUBCASE("z^2: double root at the origin") {
    RootSet rs = poly_roots(poly<Q>({"0", "0", "1"}), ctx);
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0].multiplicity == 2);
    CHECK(rs.roots[0].location.is_zero());
  }
  SUBCASE("1 - 4z^2: symmetric pair") {
    RootSet rs = poly_roots(poly<Q>({"1", "0", "-4"}), ctx);
    REQUIRE(rs.roots.size() == 2);
    CHECK(*rs.roots[0].exact == cq("-1/2"));
    CHECK(*rs.roots[1].exact == cq("1/2"));
  }
  SUBCASE("(1-2z)^2: double rational root recognized") {
    RootSet rs = poly_roots(poly<Q>({"1", "-4", "4"}), ctx);
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0].multiplicity == 2);
    CHECK(*rs.roots[0].exact == cq("1/2"));
  }
  SUBCASE("complex rational roots of 1 + 4z^2") {
    RootSet rs = poly_roots(poly<Q>({"1", "0", "4"}), ctx);
    REQUIRE(rs.roots.size() == 2);
    for (const auto& r : rs.roots) {
      REQUIRE(r.exact.has_value());
      CHECK(r.exact->re == 0);
      CHECK(abs(r.exact->im) == parse_rational("1/2"));
    }
  }
  SUBCASE("irrational roots still satisfy the residual bound") {
    // z^2 - 2: roots +-sqrt(2)
    RootSet rs = poly_roots(poly<Q>({"-2", "0", "1"}), ctx);
    REQUIRE(rs.roots.size() == 2);
    CHECK(!rs.roots[0].exact.has_value());
    CHECK(std::abs(abs_double(rs.roots[0].location) - std::sqrt(2.0)) < 1e-30);
    CHECK(rs.residual_bound < 1e-15);
  }
  SUBCASE("bigfloat mode reconstruction") {
    PrecisionContext fctx = PrecisionContext::big_float(256);
    Polynomial<BigFloat> p = poly<F>({"1", "-5", "6"});
    RootSet rs = poly_roots(p, fctx);
    REQUIRE(rs.roots.size() == 2);
    // rebuild the monic polynomial and compare against p/lead
    Polynomial<BigFloat> rebuilt = Polynomial<BigFloat>::one();
    for (const auto& r : rs.roots)
      for (int i = 0; i < r.multiplicity; ++i)
        rebuilt = rebuilt * Polynomial<BigFloat>(std::vector<CxF>{-r.location, CxF{BigFloat(1)}});
    Polynomial<BigFloat> target = p.monic();
    for (int i = 0; i <= target.degree(); ++i)
      CHECK(to_double(abs_bf(rebuilt.coeff(i) - target.coeff(i))) < 1e-40);
  }
  SUBCASE("zero polynomial rejected") {
    CHECK_THROWS_AS(poly_roots(Polynomial<Rational>::zero(), ctx), std::invalid_argument);
  }
}

TEST_CASE("root multiplicities sum to the degree") {
  PrecisionContext ctx = PrecisionContext::exact_rational();
  // (1-2z)^2 (1+3z) z
  Polynomial<Rational> p = poly<Q>({"1", "-4", "4"}) * poly<Q>({"1", "3"}) * poly<Q>({"0", "1"});
  RootSet rs = poly_roots(p, ctx);
  CHECK(rs.total_multiplicity() == p.degree());
}
