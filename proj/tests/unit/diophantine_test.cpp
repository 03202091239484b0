#include <gtest/gtest.h>

#include <cmath>

#include "extremal/diophantine.hpp"
#include "extremal/selftest.hpp"
#include "test_support.hpp"

using namespace extremal;
using testing_support::Rng;

namespace {

// Convergent denominators q_0 = 1, q_1 = a_1, ... of x in (0,1), repeated values dropped.
std::vector<BigInt> convergent_denominators(Rational x, int max_terms) {
  std::vector<BigInt> out;
  BigInt q_prev = 1, q = 0;
  for (int i = 0; i < max_terms; ++i) {
    BigInt a = floor_of(x);
    BigInt q_next = a * q + q_prev;
    if (out.empty() || out.back() != q_next) out.push_back(q_next);
    q_prev = q;
    q = q_next;
    Rational frac = x - Rational(a);
    if (frac == 0) break;
    x = 1 / frac;
  }
  return out;
}

Rational dist_to_int(const Rational& x) { return abs(x - Rational(round_half_even(x))); }

}  // namespace

TEST(BestApprox, HalfAtQOne) {
  auto w = best_approx({{Rational(1, 2)}}, 1);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].q[0], 1);
  EXPECT_EQ(w[0].quality, Rational(1, 2));
  EXPECT_TRUE(w[0].tie);
}

TEST(BestApprox, ZeroMatrixIsRationalDependence) {
  auto w = best_approx({{0, 0}}, 3);
  ASSERT_FALSE(w.empty());
  EXPECT_EQ(w[0].quality, 0);
  EXPECT_EQ(w[0].size, 1);
}

TEST(BestApprox, FrontierIsConvergentDenominators) {
  for (const char* token : {"golden", "sqrt2", "random:5:30", "random:9:30"}) {
    Rational x = parse_test_number(token, 40).value;
    x -= Rational(floor_of(x));
    const long Q = 5000;
    auto frontier = best_approx({{x}}, Q);
    std::vector<BigInt> expect;
    for (const auto& d : convergent_denominators(x, 60)) {
      if (d <= Q) expect.push_back(d);
    }
    std::vector<BigInt> got;
    for (const auto& w : frontier) got.push_back(w.q[0] < 0 ? BigInt(-w.q[0]) : w.q[0]);
    EXPECT_EQ(got, expect) << token;
  }
}

TEST(BestApprox, FibonacciQuality) {
  const Rational phi = golden_number(40).value;
  long f_prev = 1, f = 1;
  for (int k = 2; k < 20; ++k) {
    long next = f + f_prev;
    f_prev = f;
    f = next;
  }
  auto frontier = best_approx({{phi}}, f);
  for (const auto& w : frontier) {
    // quality within a factor 2 of 1/(sqrt5 q)
    const double q = to_double(w.size), quality = to_double(w.quality);
    if (q < 3) continue;
    EXPECT_LT(quality * q * std::sqrt(5.0), 2.0);
    EXPECT_GT(quality * q * std::sqrt(5.0), 0.5);
  }
}

TEST(BestApprox, NearestPIsOptimalAgainstNeighbourhood) {
  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    RationalMatrix A(2, RationalVector(2));
    for (auto& r : A)
      for (auto& a : r) a = rng.rational(40, 17);
    IntVector q = rng.int_vector(2, 9);
    if (q[0] == 0 && q[1] == 0) continue;
    ApproxWitness w = evaluate_witness(A, q, ApproxMode::kStandard);
    for (long d0 = -2; d0 <= 2; ++d0)
      for (long d1 = -2; d1 <= 2; ++d1) {
        Rational m = 0;
        for (int r = 0; r < 2; ++r) {
          Rational x = A[r][0] * Rational(q[0]) + A[r][1] * Rational(q[1]) + Rational(w.p[r] + (r ? d1 : d0));
          m = std::max(m, Rational(abs(x)));
        }
        EXPECT_GE(m, w.quality);
      }
  }
}

TEST(Multiplicative, SizeIsProductOfPlusParts) {
  auto w = multiplicative_best({Rational(1, 3), 0}, 20);
  for (const auto& x : w) {
    Rational prod = abs_plus(Rational(x.q[0])) * abs_plus(Rational(x.q[1]));
    EXPECT_EQ(x.size, prod);
  }
  ApproxWitness only_last = evaluate_witness({{Rational(2, 7), 0}}, {0, 5}, ApproxMode::kMultiplicative);
  EXPECT_EQ(only_last.size, 5);
}

TEST(Multiplicative, StandardWitnessesAreMultiplicative) {
  Rng rng(52);
  for (int trial = 0; trial < 40; ++trial) {
    RationalVector y = {Rational(rng.range(1, 996), 997), Rational(rng.range(1, 990), 991)};
    const Rational v = 2;
    for (const auto& w : best_approx({y}, 40)) {
      if (!le_power(w.quality, w.size, v)) continue;
      Rational prod = abs_plus(Rational(w.q[0])) * abs_plus(Rational(w.q[1]));
      EXPECT_TRUE(le_power(w.quality, prod, v / 2));
    }
  }
}

TEST(Exponent, GoldenNearOne) {
  ExponentEstimate e = exponent_estimate({{golden_number(40).value}}, {100, 1000, 10000}, ApproxMode::kStandard);
  EXPECT_GE(e.omega_hat, 0.9);
  EXPECT_LE(e.omega_hat, 1.1);
  for (size_t i = 1; i < e.omega_by_Q.size(); ++i) EXPECT_GE(e.omega_by_Q[i].second, e.omega_by_Q[i - 1].second);
}

TEST(Exponent, LiouvilleInjected) {
  TestNumber L = liouville_number(10, 5);
  ExponentEstimate e =
      exponent_estimate({{L.value}}, {1000}, ApproxMode::kStandard, liouville_convergents(10, 5, 1, 0));
  EXPECT_GE(e.omega_hat, 4.0);
  bool saw_injected = false;
  for (const auto& w : e.witness_trail) saw_injected |= w.injected;
  EXPECT_TRUE(saw_injected);
}

TEST(Exponent, RationalGivesQualityZero) {
  ExponentEstimate e = exponent_estimate({{Rational(1, 3), Rational(1, 9)}}, {20}, ApproxMode::kStandard);
  EXPECT_TRUE(std::isinf(e.omega_hat));
  EXPECT_EQ(e.witness_trail.back().quality, 0);
}

TEST(Exponent, MultiplicativeGenericPairNearTwo) {
  for (uint64_t seed : {3, 4}) {
    RationalVector y = {golden_number(30).value, random_number(seed, 30).value};
    ExponentEstimate e = exponent_estimate({y}, {300}, ApproxMode::kMultiplicative);
    EXPECT_NEAR(e.omega_hat, 2.0, 0.4) << seed;
  }
}

TEST(Dirichlet, FloorHoldsForRandomRationalPairs) {
  Rng rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    RationalVector y;
    for (int i = 0; i < 2; ++i) {
      long den = rng.range(51, 5000);
      y.emplace_back(rng.range(0, den - 1), den);
    }
    bool found = false;
    for (const auto& w : best_approx({y}, 50)) {
      if (w.quality * w.size * w.size <= 2) found = true;
    }
    EXPECT_TRUE(found);
  }
}

TEST(TestNumbers, TruncationRule) {
  TestNumber g = golden_number(40);
  EXPECT_FALSE(g.exact);
  EXPECT_NO_THROW(check_truncation(g, 1000000000000L, 2));
  const long d = minimal_digits(10000, 3);
  EXPECT_NO_THROW(check_truncation(golden_number(d), 10000, 3));
  try {
    check_truncation(golden_number(d - 1), 10000, 3);
    FAIL() << "insufficient truncation accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecision);
    EXPECT_NE(std::string(e.what()).find(std::to_string(d)), std::string::npos);
  }
  EXPECT_NO_THROW(check_truncation(rational_number(Rational(3, 7)), 1L << 40, 10));
}

TEST(TestNumbers, LiouvilleIsExactSum) {
  TestNumber L = liouville_number(10, 4);
  EXPECT_TRUE(L.exact);
  Rational expect = Rational(1, 10) + Rational(1, 100) + pow_int(Rational(1, 10), 6) + pow_int(Rational(1, 10), 24);
  EXPECT_EQ(L.value, expect);
  auto qs = liouville_convergents(10, 4);
  ASSERT_EQ(qs.size(), 3u);
  EXPECT_EQ(qs[2][0], BigInt(1000000));
  EXPECT_EQ(parse_test_number("3/7").value, Rational(3, 7));
  EXPECT_EQ(parse_test_number("liouville:10:4").value, expect);
}

TEST(TransferForward, GammaZeroAtDirichletExponent) {
  for (int n = 1; n <= 4; ++n) {
    const Rational b(1, n);
    EXPECT_EQ(lemma21_gamma(1, b, n), 0);
    Lemma21Result r = lemma21_forward(1, b, n, Rational(1, 1000), 3);
    EXPECT_TRUE(r.certified);
    Rational et;
    ASSERT_TRUE(r.exp_t.is_rational(&et));
    EXPECT_EQ(et, pow_int(Rational(3), n));  // t = n log|z|
  }
  EXPECT_EQ(lemma21_exponent(1, Rational(1, 3), lemma21_gamma(1, Rational(1, 3), Rational(17, 4))), Rational(17, 4));
}

TEST(TransferForward, FibonacciPairs) {
  const Rational phi = golden_number(60).value;
  long a = 1, b = 2;
  for (int k = 0; k < 25; ++k) {
    Rational x = phi * Rational(a) - Rational(b);
    Lemma21Result r = lemma21_forward(1, 1, 1, x, a);
    EXPECT_EQ(r.gamma, 0);
    EXPECT_TRUE(r.certified);
    EXPECT_GT(r.margin, 0.3);
    long c = a + b;
    a = b;
    b = c;
  }
}

TEST(TransferForward, RejectsNonWitness) { EXPECT_THROW(lemma21_forward(1, 1, 2, Rational(1, 2), 3), Error); }

TEST(TransferForward, RoundTripSuiteSmall) {
  RoundTripPlan plan;
  plan.cases = 9;
  plan.Q_by_n = {80, 30, 10};
  plan.k_max = 4;
  SuiteOutcome o = lemma21_roundtrip_suite(plan, 5);
  EXPECT_TRUE(o.pass) << o.detail;
}

TEST(MultiplicativeTransfer, ExactPowers) {
  // n = 2, gamma = 1/4 at v = 5; z = (4, 1): e^{t/2} = 4, t_1 = t/4 + log 4, t_2 = t/4
  Lemma51Result r = lemma51_forward(5, Rational(1, 64), {4, 1});
  EXPECT_EQ(r.gamma, Rational(1, 4));
  EXPECT_EQ(r.exp_t, PowerProduct::of(16));
  EXPECT_EQ(r.exp_t_i[0], PowerProduct::of(8));
  EXPECT_EQ(r.exp_t_i[1], PowerProduct::of(2));
  EXPECT_TRUE(r.sum_identity);
  EXPECT_TRUE(r.certified);
  EXPECT_FALSE(r.degenerate);
}

TEST(MultiplicativeTransfer, SumIdentityOnRandomInputs) {
  Rng rng(54);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rng.range(1, 3));
    RationalVector z;
    Rational prod = 1;
    for (int i = 0; i < n; ++i) {
      z.emplace_back(rng.range(-30, 30));
      prod *= abs_plus(z.back());
    }
    const Rational v = Rational(n) + Rational(rng.range(1, 12), rng.range(1, 4));
    Rational x = 1 / (pow_int(prod, static_cast<long>(ceil_of(v))) + 1);  // below prod^{-v/n}
    Lemma51Result r = lemma51_forward(v, x, z);
    EXPECT_TRUE(r.sum_identity);
    EXPECT_EQ(r.degenerate, prod == 1);
  }
}

TEST(HomogeneousSetTest, ClosedUnderIntegerScaling) {
  HomogeneousSet E({Rational(3, 11), Rational(-2, 5)}, ApproxMode::kStandard);
  EXPECT_TRUE(E.check_homogeneous(6, Rational(1, 2)));
  auto pts = E.enumerate(4, Rational(1, 3));
  for (const auto& p : pts) EXPECT_TRUE(E.contains(p));
}

TEST(TrailCsvShape, SlopeStatistic) {
  std::vector<ApproxWitness> trail;
  for (long q : {2, 4, 8, 16}) {
    ApproxWitness w;
    w.q = {q};
    w.p = {0};
    w.size = q;
    w.quality = Rational(1, q * q);
    trail.push_back(w);
  }
  EXPECT_NEAR(trail_slope(trail), 2.0, 1e-12);
}
