#include <gtest/gtest.h>

#include <cmath>

#include "extremal/good_functions.hpp"
#include "test_support.hpp"

using namespace extremal;
using testing_support::Rng;

namespace {

double as_double(const HighReal& x) { return x.convert_to<double>(); }

}  // namespace

TEST(Polynomial, ArithmeticAndDivision) {
  Polynomial p(RationalVector{-1, 0, 1});  // x^2 - 1
  Polynomial d(RationalVector{-1, 1});     // x - 1
  Polynomial q, r;
  p.divmod(d, &q, &r);
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(q.coeffs(), (RationalVector{1, 1}));
  EXPECT_EQ(p.derivative().coeffs(), (RationalVector{0, 2}));
  EXPECT_EQ((d * d + d.scaled(2)).coeffs(), (RationalVector{-1, 0, 1}));
  EXPECT_EQ(p(Rational(1, 2)), Rational(-3, 4));
  EXPECT_EQ(gcd(p, d * d).monic().coeffs(), d.coeffs());
  EXPECT_EQ(square_free_part(d * d * Polynomial(RationalVector{1, 1})).degree(), 2);
}

TEST(Polynomial, RangeEnclosesSampledValues) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    RationalVector c;
    for (int i = 0; i < 5; ++i) c.push_back(rng.rational(9, 5));
    Polynomial p(c);
    Rational lo = rng.rational(4, 3), hi = lo + Rational(rng.range(1, 8), 4);
    auto [mn, mx] = p.range(lo, hi);
    for (int i = 0; i <= 16; ++i) {
      Rational x = lo + (hi - lo) * Rational(i, 16);
      EXPECT_LE(mn, p(x));
      EXPECT_GE(mx, p(x));
    }
  }
}

TEST(Polynomial, IsolatesRootsOfProducts) {
  // (x - 1/3)(x + 1/2)(x^2 - 2)
  Polynomial p = Polynomial(RationalVector{Rational(-1, 3), 1}) * Polynomial(RationalVector{Rational(1, 2), 1}) *
                 Polynomial(RationalVector{-2, 0, 1});
  auto roots = isolate_roots(p, -2, 2, Rational(1, 1000000));
  ASSERT_EQ(roots.size(), 4u);
  const double expect[] = {-std::sqrt(2.0), -0.5, 1.0 / 3, std::sqrt(2.0)};
  for (int i = 0; i < 4; ++i) {
    EXPECT_LE(roots[i].first.convert_to<double>(), expect[i] + 1e-12);
    EXPECT_GE(roots[i].second.convert_to<double>(), expect[i] - 1e-12);
    EXPECT_LE(roots[i].second - roots[i].first, Rational(1, 1000000));
  }
}

TEST(Sublevel, MonomialClosedForm) {
  for (int l = 1; l <= 5; ++l) {
    auto f = FunctionSpec::polynomial(Polynomial::monomial(l));
    for (const Rational& t : {Rational(1, 2), Rational(1, 1024), Rational(3, 7)}) {
      auto s = sublevel_measure(f, Ball::interval(-1, 1), t);
      // |{x in (-1,1) : |x|^l < t}| = 2 t^{1/l}
      const double expect = 2 * std::pow(t.convert_to<double>(), 1.0 / l);
      EXPECT_LE(s.inner.convert_to<double>(), expect + 1e-9);
      EXPECT_GE(s.outer.convert_to<double>(), expect - 1e-9);
      EXPECT_LT(s.undecided().convert_to<double>(), 1e-6);
    }
  }
}

TEST(Goodness, MonomialAtCriticalAlphaHasConstantOne) {
  for (int l = 1; l <= 5; ++l) {
    auto f = FunctionSpec::polynomial(Polynomial::monomial(l));
    auto prof = goodness_profile(f, {Ball::interval(-1, 1)}, Rational(1, l), log_eps_grid(8));
    EXPECT_NEAR(prof.C_hat(), 1.0, 1e-6) << l;
  }
}

TEST(Goodness, SquareAtAlphaOneDiverges) {
  auto f = FunctionSpec::polynomial(Polynomial::monomial(2));
  auto small = goodness_profile(f, {Ball::interval(-1, 1)}, 1, log_eps_grid(2));
  auto large = goodness_profile(f, {Ball::interval(-1, 1)}, 1, log_eps_grid(6));
  // ratio eps^{1/2} / eps = e^{L/2}
  EXPECT_GT(as_double(large.log_C_hat), as_double(small.log_C_hat) + 10);
  EXPECT_NEAR(as_double(large.log_C_hat), 32, 1e-6);
}

TEST(Goodness, ScalingInvariance) {
  // f(x) = x^3 on (0, 2r) has the same profile for every r
  auto f = FunctionSpec::polynomial(Polynomial::monomial(3));
  const auto eps = log_eps_grid(5);
  double first = 0;
  for (int i = 0; i < 4; ++i) {
    Rational r(1, 1 << (3 * i));
    auto prof = goodness_profile(f, {Ball::interval(0, 2 * r)}, Rational(1, 3), eps);
    if (i == 0) first = prof.C_hat();
    EXPECT_NEAR(prof.C_hat(), first, 1e-9);
  }
}

TEST(Goodness, SupOfContainsEachPart) {
  auto a = FunctionSpec::polynomial(Polynomial(RationalVector{0, 1}));
  auto b = FunctionSpec::polynomial(Polynomial(RationalVector{Rational(-1, 2), 0, 1}));
  auto s = FunctionSpec::sup_of({a, b});
  for (int i = -8; i <= 8; ++i) {
    Rational x(i, 8);
    EXPECT_EQ(s.evaluate({x}), std::max(Rational(abs(a.evaluate({x}))), Rational(abs(b.evaluate({x})))));
  }
  // sublevel of the sup is inside each part's sublevel
  const Rational t(1, 10);
  auto ss = sublevel_measure(s, Ball::interval(-1, 1), t);
  EXPECT_LE(ss.inner, sublevel_measure(a, Ball::interval(-1, 1), t).outer);
  EXPECT_LE(ss.inner, sublevel_measure(b, Ball::interval(-1, 1), t).outer);
}

TEST(Cantor, SurvivingMeasureIsTheProduct) {
  for (int levels = 1; levels <= 4; ++levels) {
    CantorBad c = build_cantor_bad(levels);
    Rational prod = 1;
    for (int k = 1; k <= levels; ++k) prod *= 1 - Rational(1, pow_int(Rational(3), k + 1).convert_to<BigInt>());
    EXPECT_EQ(c.surviving_measure, prod);
    Rational total = 0;
    for (const auto& [a, b] : c.surviving) total += b - a;
    EXPECT_EQ(total, prod);
    for (const auto& r : c.removed) {
      EXPECT_FALSE(c.vanishes_at((r.a + r.b) / 2));
      EXPECT_TRUE(c.vanishes_at(r.a));
    }
    for (const auto& [a, b] : c.surviving) {
      EXPECT_TRUE(c.vanishes_at((a + b) / 2));
      EXPECT_TRUE(c.in_surviving_set((a + b) / 2));
    }
  }
}

TEST(Cantor, LogCoefficientIsTripleExponential) {
  CantorBad c = build_cantor_bad(3);
  for (int k = 1; k <= 3; ++k) EXPECT_NEAR(as_double(c.log_c(k)), -std::pow(3.0, k) * std::log(3.0), 1e-9);
}

TEST(NotGood, CantorGrowsAtRemovedEndpoint) {
  auto f = FunctionSpec::cantor_bad(4);
  Rational x0;
  for (const auto& r : f.cantor().removed) {
    if (r.stage == 2) {
      x0 = r.a;
      break;
    }
  }
  auto table = demonstrate_not_good(f, x0, {1}, Rational(1, 256), 4, log_eps_grid(24), 1);
  ASSERT_EQ(table.log_growth.size(), 1u);
  EXPECT_GE(as_double(table.log_growth[0].second), std::log(10.0));
  EXPECT_EQ(table.rows.size(), 5u);
}

TEST(NotGood, PolynomialControlIsFlat) {
  auto f = FunctionSpec::polynomial(Polynomial::monomial(2));
  auto table = demonstrate_not_good(f, 0, {Rational(1, 2)}, Rational(1, 256), 4, log_eps_grid(8), 1);
  ASSERT_EQ(table.log_growth.size(), 1u);
  EXPECT_NEAR(as_double(table.log_growth[0].second), 0, 1e-6);
}

TEST(Epsilon, GridAndLabels) {
  auto g = log_eps_grid(3);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g[3].neg_log, 8);
  EXPECT_NEAR(as_double(g[2].log()), -4, 1e-12);
  EXPECT_EQ(Epsilon::exact(Rational(1, 4)).label(), "1/4");
  EXPECT_EQ(g[0].label(), "exp(-1)");
}
