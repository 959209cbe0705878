#include "doctest.h"

#include "recurpade/buslaev.hpp"
#include "recurpade/radius.hpp"
#include "recurpade/recurrence.hpp"
#include "test_util.hpp"

using namespace recurpade;

namespace {

template <class R>
Recurrence<R> rec_3n_2n() {  // f_n = 5 f_{n-1} - 6 f_{n-2}
  return Recurrence<R>::constant(scalars<R>({"-5", "6"}));
}

template <class R>
Recurrence<R> rec_pm2() {  // f_n = 4 f_{n-2}
  return Recurrence<R>::constant(scalars<R>({"0", "-4"}));
}

CxQ closed_form_3n_2n(int n) { return CxQ{int_pow(Rational(3), n) - int_pow(Rational(2), n)}; }

// max relative recurrence residual of a solution over all checkable indices
template <class R>
double max_residual(const Recurrence<R>& rec, const Solution<R>& sol) {
  int m = rec.order();
  double worst = 0;
  for (int n = m; n <= sol.series.truncation_order(); ++n) {
    auto a = rec.coeffs_at(n);
    Complex<R> acc = sol.series.coeff(n);
    BigFloat scale = abs_bf(to_bigfloat_cx(sol.series.coeff(n)));
    for (int j = 1; j <= m; ++j) {
      acc += a[static_cast<std::size_t>(j - 1)] * sol.series.coeff(n - j);
      scale += abs_bf(to_bigfloat_cx(a[static_cast<std::size_t>(j - 1)])) *
               abs_bf(to_bigfloat_cx(sol.series.coeff(n - j)));
    }
    if (scale == 0) continue;
    worst = std::max(worst, to_double(abs_bf(to_bigfloat_cx(acc)) / scale));
  }
  return worst;
}

// long division in the rational field; remainder must vanish for divisibility
Polynomial<Rational> poly_mod(Polynomial<Rational> a, const Polynomial<Rational>& b) {
  while (!a.is_zero() && a.degree() >= b.degree()) {
    Complex<Rational> f = a.leading() / b.leading();
    int shift = a.degree() - b.degree();
    a = a - b * Polynomial<Rational>::monomial(shift, f);
  }
  return a;
}

}  // namespace

TEST_CASE("forward_solve") {
  SUBCASE("3^n - 2^n family") {
    auto sol = forward_solve(rec_3n_2n<Rational>(), scalars<Q>({"0", "1"}), 5);
    CHECK(sol.series.coeffs == scalars<Q>({"0", "1", "5", "19", "65", "211"}));
    auto longer = forward_solve(rec_3n_2n<Rational>(), scalars<Q>({"0", "1"}), 60);
    for (int n = 0; n <= 60; ++n) CHECK(longer.series.coeff(n) == closed_form_3n_2n(n));
  }
  SUBCASE("zero initial conditions give the trivial solution") {
    auto sol = forward_solve(rec_3n_2n<Rational>(), scalars<Q>({"0", "0"}), 10);
    for (const auto& c : sol.series.coeffs) CHECK(c.is_zero());
  }
  SUBCASE("interleaved f_n = 4 f_{n-2}") {
    auto sol = forward_solve(rec_pm2<Rational>(), scalars<Q>({"1", "0"}), 4);
    CHECK(sol.series.coeffs == scalars<Q>({"1", "0", "4", "0", "16"}));
  }
}

TEST_CASE("backward_solve") {
  SUBCASE("two steps back on the 3^n-2^n family") {
    auto head = backward_solve(rec_3n_2n<Rational>(), scalars<Q>({"5", "19"}), 2);
    CHECK(head == scalars<Q>({"0", "1"}));
  }
  SUBCASE("zero tail") {
    auto head = backward_solve(rec_3n_2n<Rational>(), scalars<Q>({"0", "0"}), 2);
    CHECK(head == scalars<Q>({"0", "0"}));
  }
  SUBCASE("interleaved recurrence") {
    auto head = backward_solve(rec_pm2<Rational>(), scalars<Q>({"4", "0"}), 2);
    CHECK(head == scalars<Q>({"1", "0"}));
  }
  SUBCASE("round-trip with forward_solve") {
    auto sol = forward_solve(rec_3n_2n<Rational>(), scalars<Q>({"2", "-7"}), 20);
    std::vector<CxQ> tail = {sol.series.coeff(15), sol.series.coeff(16)};
    auto head = backward_solve(rec_3n_2n<Rational>(), tail, 15);
    for (int i = 0; i < 15; ++i) CHECK(head[static_cast<std::size_t>(i)] == sol.series.coeff(i));
  }
}

TEST_CASE("alpha_poly_at and char_poly") {
  CHECK(alpha_poly_at(rec_3n_2n<Rational>(), 7) == poly<Q>({"1", "-5", "6"}));
  auto m1 = Recurrence<Rational>::constant(scalars<Q>({"-1"}));
  CHECK(alpha_poly_at(m1, 3) == poly<Q>({"1", "-1"}));
  CHECK(alpha_poly_at(rec_pm2<Rational>(), 2) == poly<Q>({"1", "0", "-4"}));

  CHECK(char_poly(rec_3n_2n<Rational>()) == poly<Q>({"6", "-5", "1"}));
  CHECK(alpha_limit_poly(rec_3n_2n<Rational>()) == poly<Q>({"1", "-5", "6"}));
  CHECK(char_poly(m1) == poly<Q>({"-1", "1"}));
  CHECK(char_poly(rec_pm2<Rational>()) == poly<Q>({"-4", "0", "1"}));
  CHECK(alpha_limit_poly(rec_pm2<Rational>()) == poly<Q>({"1", "0", "-4"}));

  auto tbl = Recurrence<Rational>::from_table(1, {{cq("-2")}, {cq("-2")}});
  CHECK_THROWS_AS(char_poly(tbl), ComputeError);
}

TEST_CASE("recurrence invariants at construction") {
  CHECK_THROWS_AS(Recurrence<Rational>::constant(scalars<Q>({"-5", "0"})), std::invalid_argument);
  CHECK_THROWS_AS(Recurrence<Rational>::from_table(2, {{cq("1"), cq("0")}}), std::invalid_argument);
}

TEST_CASE("reciprocity: char roots and alpha roots are reciprocal") {
  PrecisionContext ctx = PrecisionContext::exact_rational();
  RootSet pr = poly_roots(char_poly(rec_3n_2n<Rational>()), ctx);
  RootSet ar = poly_roots(alpha_limit_poly(rec_3n_2n<Rational>()), ctx);
  REQUIRE(pr.roots.size() == 2);
  REQUIRE(ar.roots.size() == 2);
  CHECK(*pr.roots[0].exact == cq("2"));
  CHECK(*pr.roots[1].exact == cq("3"));
  CHECK(*ar.roots[0].exact == cq("1/3"));
  CHECK(*ar.roots[1].exact == cq("1/2"));
}

TEST_CASE("sg_bounds") {
  PrecisionContext ctx = PrecisionContext::exact_rational();
  SUBCASE("constant alpha_n = 1 - 4z^2") {
    SGBound sg = sg_bounds(rec_pm2<Rational>(), 40, ctx);
    CHECK(sg.S == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sg.G == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(!sg.g_growing);
  }
  SUBCASE("alpha_n = 1 - (2 + 1/n) z is monotone") {
    using P = Recurrence<Rational>::Perturbation;
    P pt;
    pt.kind = P::Kind::OneOverN;
    pt.amplitude = cq("-1");
    auto rec = Recurrence<Rational>::perturbed(scalars<Q>({"-2"}), {pt});
    SGBound sg = sg_bounds(rec, 60, ctx);
    CHECK(sg.S <= sg.G);
    CHECK(sg.S >= 1.0 / 3.0);  // 1/(2 + 1/m), m = 1
    CHECK(sg.G <= 0.5);
    CHECK(sg.S == doctest::Approx(1.0 / (2.0 + 1.0 / 30)).epsilon(1e-6));
  }
  SUBCASE("zero escaping to infinity is flagged") {
    // alpha_n = (1 - 2z)(1 - z/n): zeros {1/2, n}
    std::vector<std::vector<CxQ>> rows;
    for (int n = 2; n <= 60; ++n) {
      Rational inv = Rational(1) / n;
      rows.push_back({CxQ{Rational(-2) - inv}, CxQ{2 * inv}});
    }
    auto rec = Recurrence<Rational>::from_table(2, rows);
    SGBound g1 = sg_bounds(rec, 30, ctx);
    SGBound g2 = sg_bounds(rec, 60, ctx);
    CHECK(g2.G > g1.G);
    CHECK(g2.g_growing);
    CHECK(g2.S == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("estimate_radius") {
  PrecisionContext ctx = PrecisionContext::exact_rational();
  SUBCASE("pure geometric 2^n") {
    std::vector<CxQ> c;
    for (int n = 0; n <= 64; ++n) c.push_back(CxQ{int_pow(Rational(2), n)});
    PowerSeries<Rational> f(c);
    auto ratio = estimate_radius(f, RadiusMethod::RatioTest, ctx);
    CHECK(ratio.value == doctest::Approx(0.5).epsilon(1e-12));
    auto root = estimate_radius(f, RadiusMethod::RootTestRegression, ctx);
    CHECK(root.value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(ratio.confidence_width < ratio.value);
    CHECK(root.confidence_width < root.value);
  }
  SUBCASE("3^n - 2^n at n = 200 within 1e-8") {
    auto sol = forward_solve(rec_3n_2n<Rational>(), scalars<Q>({"0", "1"}), 200);
    auto est = estimate_radius(sol.series, RadiusMethod::RatioTest, ctx);
    CHECK(std::abs(est.value - 1.0 / 3.0) <= 1e-8 / 3.0);
    CHECK(est.first_n >= 150);
  }
  SUBCASE("(1-z)^(1/2): radius 1 within 1e-2 at N = 2000") {
    std::vector<CxQ> c(2001);
    c[0] = cq("1");
    Rational prev(1);
    for (int n = 1; n <= 2000; ++n) {
      prev = prev * (Rational(n) - Rational(3) / 2) / n;
      c[static_cast<std::size_t>(n)] = CxQ{prev};
    }
    PowerSeries<Rational> f(std::move(c));
    auto est = estimate_radius(f, RadiusMethod::RootTestRegression, ctx);
    CHECK(std::abs(est.value - 1.0) <= 1e-2);
  }
  SUBCASE("insufficient data") {
    PowerSeries<Rational> f(scalars<Q>({"1", "2", "4"}));
    CHECK_THROWS_AS(estimate_radius(f, RadiusMethod::RatioTest, ctx), ComputeError);
  }
  SUBCASE("all-zero tail") {
    std::vector<CxQ> c(64);
    c[0] = cq("1");
    c[1] = cq("1");
    PowerSeries<Rational> f(std::move(c));
    CHECK_THROWS_WITH_AS(estimate_radius(f, RadiusMethod::RatioTest, ctx),
                         doctest::Contains("AllZeroTail"), ComputeError);
  }
}

TEST_CASE("poincare property: ratio limits hit characteristic roots") {
  PrecisionContext ctx = PrecisionContext::exact_rational();
  SUBCASE("constant coefficients, distinct moduli") {
    for (auto init : {scalars<Q>({"1", "1"}), scalars<Q>({"1", "0"}), scalars<Q>({"1", "2"})}) {
      auto sol = forward_solve(rec_3n_2n<Rational>(), init, 400);
      CxF lim = ratio_limit(sol.series, ctx);
      double d2 = std::min(dist(lim, CxF{BigFloat(2)}), dist(lim, CxF{BigFloat(3)}));
      CHECK(d2 <= 1e-6);
    }
  }
  SUBCASE("geometric perturbation keeps the limit sharp") {
    using P = Recurrence<Rational>::Perturbation;
    P p1, p2;
    p1.kind = P::Kind::Geometric;
    p1.amplitude = cq("1/3");
    p1.rho = parse_rational("1/2");
    p2.kind = P::Kind::None;
    auto rec = Recurrence<Rational>::perturbed(scalars<Q>({"-5", "6"}), {p1, p2});
    auto sol = forward_solve(rec, scalars<Q>({"1", "1"}), 400);
    CxF lim = ratio_limit(sol.series, ctx);
    CHECK(dist(lim, CxF{BigFloat(3)}) <= 1e-6);
  }
  SUBCASE("1/n perturbation still converges, more slowly") {
    using P = Recurrence<Rational>::Perturbation;
    P p1, p2;
    p1.kind = P::Kind::OneOverN;
    p1.amplitude = cq("1");
    p2.kind = P::Kind::OneOverN;
    p2.amplitude = cq("-1");
    auto rec = Recurrence<Rational>::perturbed(scalars<Q>({"-5", "6"}), {p1, p2});
    auto sol = forward_solve(rec, scalars<Q>({"1", "1"}), 400);
    CxF lim = ratio_limit(sol.series, ctx);
    CHECK(dist(lim, CxF{BigFloat(3)}) <= 1e-1);
  }
}

TEST_CASE("theorem-1 property: finite positive radius under S > 0, G finite") {
  PrecisionContext ctx = PrecisionContext::exact_rational();
  using P = Recurrence<Rational>::Perturbation;
  for (int k = 0; k < 6; ++k) {
    P p1, p2;
    p1.kind = k % 2 ? P::Kind::OneOverN : P::Kind::Geometric;
    p1.amplitude = cq(std::to_string(k + 1), "0");
    p1.rho = parse_rational("1/3");
    p2.kind = P::Kind::None;
    auto rec = Recurrence<Rational>::perturbed(scalars<Q>({"-5", "6"}), {p1, p2});
    SGBound sg = sg_bounds(rec, 40, ctx);
    REQUIRE(sg.S > 0);
    REQUIRE(sg.G < 10);
    auto sol = forward_solve(rec, scalars<Q>({std::to_string(k + 1), "1"}), 200);
    auto est = estimate_radius(sol.series, RadiusMethod::RatioTest, ctx);
    CHECK(est.value > 0);
    CHECK(std::isfinite(est.value));
    CHECK(est.confidence_width < est.value);
  }
}

TEST_CASE("solution residual invariant") {
  SUBCASE("exact") {
    auto sol = forward_solve(rec_3n_2n<Rational>(), scalars<Q>({"3", "-1"}), 80);
    CHECK(max_residual(rec_3n_2n<Rational>(), sol) == 0.0);
  }
  SUBCASE("bigfloat") {
    PrecisionContext ctx = PrecisionContext::big_float(256);
    auto rec = rec_3n_2n<BigFloat>();
    auto sol = forward_solve(rec, scalars<F>({"3", "-1"}), 80);
    CHECK(max_residual(rec, sol) <= 10 * std::pow(10.0, ctx.zero_threshold_log10()));
  }
}

TEST_CASE("buslaev_classify") {
  PrecisionContext ctx = PrecisionContext::exact_rational();
  SUBCASE("generic solution picks the outer characteristic root") {
    auto sol = forward_solve(rec_3n_2n<Rational>(), scalars<Q>({"1", "1"}), 200);
    auto cls = buslaev_classify(rec_3n_2n<Rational>(), sol, ctx);
    CHECK(cls.R0.value == doctest::Approx(1.0 / 3).epsilon(1e-6));
    CHECK(cls.ell == 1);
    CHECK(cls.beta == poly<Q>({"1", "-3"}));
  }
  SUBCASE("pure 2^n solution lands on the other circle") {
    auto sol = forward_solve(rec_3n_2n<Rational>(), scalars<Q>({"1", "2"}), 200);
    auto cls = buslaev_classify(rec_3n_2n<Rational>(), sol, ctx);
    CHECK(cls.R0.value == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(cls.ell == 1);
    CHECK(cls.beta == poly<Q>({"1", "-2"}));
  }
  SUBCASE("shared circle collects both zeros") {
    auto sol = forward_solve(rec_pm2<Rational>(), scalars<Q>({"1", "1"}), 200);
    auto cls = buslaev_classify(rec_pm2<Rational>(), sol, ctx);
    CHECK(cls.R0.value == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(cls.ell == 2);
    CHECK(cls.beta == poly<Q>({"1", "0", "-4"}));
  }
  SUBCASE("beta divides alpha exactly") {
    auto sol = forward_solve(rec_3n_2n<Rational>(), scalars<Q>({"1", "1"}), 200);
    auto cls = buslaev_classify(rec_3n_2n<Rational>(), sol, ctx);
    CHECK(poly_mod(alpha_limit_poly(rec_3n_2n<Rational>()), cls.beta).is_zero());
  }
  SUBCASE("trivial solution is rejected as AllZeroTail") {
    auto sol = forward_solve(rec_3n_2n<Rational>(), scalars<Q>({"0", "0"}), 200);
    CHECK_THROWS_WITH_AS(buslaev_classify(rec_3n_2n<Rational>(), sol, ctx),
                         doctest::Contains("AllZeroTail"), ComputeError);
  }
}
