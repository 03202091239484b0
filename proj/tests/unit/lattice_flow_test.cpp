#include <gtest/gtest.h>

#include <cmath>

#include "extremal/diophantine.hpp"
#include "extremal/lattice.hpp"
#include "extremal/lattice_flow.hpp"
#include "extremal/oracles.hpp"
#include "test_support.hpp"

using namespace extremal;
using testing_support::Rng;

namespace {
IndexSet S(std::vector<int> m, int n) { return IndexSet(std::move(m), n); }
}  // namespace

TEST(UnipotentEmbed, ZeroIsIdentity) {
  LatticeBasis b = unipotent_embed({0, 0});
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) EXPECT_EQ(b.rows[r][c], r == c ? 1 : 0);
}

TEST(UnipotentEmbed, RowsAndDeterminant) {
  // rows are u_y e_0 = e_0 and u_y e_i = y_i e_0 + e_i
  LatticeBasis b = unipotent_embed({Rational(3, 2)});
  EXPECT_EQ(b.rows[0], (RationalVector{1, 0}));
  EXPECT_EQ(b.rows[1], (RationalVector{Rational(3, 2), 1}));
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    RationalVector y;
    for (int i = 0; i < 3; ++i) y.push_back(rng.rational(30, 11));
    EXPECT_EQ(determinant(unipotent_embed(y).rows), 1);
  }
}

TEST(FlowScale, OneParameterExponents) {
  const int n = 4;
  FlowSpec spec = FlowSpec::one_parameter(n, 8);
  for (int j = 1; j <= n; ++j) {
    for (const auto& I : subsets_of_size(n, j)) {
      Rational expect = I.contains(0) ? Rational(8) * (n + 1 - j) / n : Rational(-8) * j / n;
      EXPECT_EQ(flow_scale_exponents(spec, I), expect);
    }
  }
  FlowSpec multi = FlowSpec::multi_parameter({1, 2, 5});
  EXPECT_EQ(flow_scale_exponents(multi, S({0}, 3)), 8);
  EXPECT_EQ(flow_scale_exponents(multi, S({0, 2}, 3)), 6);
  EXPECT_EQ(flow_scale_exponents(multi, S({1, 3}, 3)), -6);
}

TEST(FlowScale, Unimodular) {
  // sum of the exponents of the coordinate axes vanishes
  FlowSpec spec = FlowSpec::multi_parameter({Rational(1, 3), 2, Rational(7, 5)});
  Rational total = 0;
  for (int i = 0; i <= 3; ++i) total += flow_scale_exponents(spec, S({i}, 3));
  EXPECT_EQ(total, 0);
}

TEST(ActFlow, BasisVectorE0) {
  FlowSpec spec = FlowSpec::one_parameter(2, 3);
  FlowedMultiVector f = act_flow_unipotent(spec, {Rational(1, 2), Rational(2, 3)}, MultiVector::basis(S({0}, 2)));
  ASSERT_EQ(f.coefficients.size(), 1u);
  const auto& c = f.coefficients.at(S({0}, 2));
  EXPECT_EQ(c.value, 1);
  auto values = f.evaluate(spec);
  EXPECT_NEAR(values.at(S({0}, 2)).convert_to<double>(), std::exp(3.0), 1e-9);
}

TEST(ActFlow, E1PicksUpY) {
  const RationalVector y = {Rational(5, 7), Rational(-2, 3)};
  FlowSpec spec = FlowSpec::one_parameter(2, 2);
  FlowedMultiVector f = act_flow_unipotent(spec, y, MultiVector::basis(S({1}, 2)));
  auto values = f.evaluate(spec);
  EXPECT_NEAR(values.at(S({0}, 2)).convert_to<double>(), std::exp(2.0) * 5.0 / 7.0, 1e-9);
  EXPECT_NEAR(values.at(S({1}, 2)).convert_to<double>(), std::exp(-1.0), 1e-12);
}

TEST(ActFlow, AgreesWithMatrixThenWedgeOracle) {
  Rng rng(42);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = static_cast<int>(rng.range(1, 4));
    const int j = static_cast<int>(rng.range(1, n));
    std::vector<IntVector> basis;
    do {
      basis.clear();
      for (int r = 0; r < j; ++r) basis.push_back(rng.int_vector(n + 1, 4));
    } while (integer_rank(basis) < j);
    RationalVector y;
    for (int i = 0; i < n; ++i) y.push_back(rng.rational(20, 9));
    OracleComparison cmp = compare_flow_with_oracle(y, represent_subgroup(basis));
    EXPECT_TRUE(cmp.equal) << cmp.first_mismatch;
    compared += cmp.compared;
  }
  EXPECT_GT(compared, 300);
}

TEST(ActFlow, SignMutationIsDetected) {
  FlowOptions bad;
  bad.flip_shuffle_parity = true;
  Rng rng(43);
  int detected = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<IntVector> basis;
    do {
      basis = {rng.int_vector(4, 3), rng.int_vector(4, 3)};
    } while (integer_rank(basis) < 2);
    OracleComparison cmp = compare_flow_with_oracle({Rational(1, 3), Rational(2, 5), Rational(-3, 7)},
                                                    represent_subgroup(basis), bad);
    detected += !cmp.equal;
  }
  EXPECT_GT(detected, 25);
}

TEST(ShortestVector, Examples) {
  EXPECT_EQ(shortest_vector_norm(make_lattice_basis({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), 1000), 1);
  EXPECT_EQ(shortest_vector_norm(make_lattice_basis({{2, 0}, {0, Rational(1, 2)}}), 1000), Rational(1, 2));
  EXPECT_THROW(make_lattice_basis({{1, 2}, {2, 4}}), Error);
}

TEST(ShortestVector, AgainstBruteForce) {
  Rng rng(44);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<RationalVector> rows(3, RationalVector(3));
    for (auto& r : rows)
      for (auto& x : r) x = rng.rational(9, 4);
    if (determinant(rows) == 0) continue;
    ShortestVector sv = shortest_vector(rows, 1L << 20);
    const Rational got = sv.norm;
    Rational achieved = 0;
    for (int i = 0; i < 3; ++i) {
      Rational x = 0;
      for (int r = 0; r < 3; ++r) x += Rational(sv.coefficients[r]) * rows[r][i];
      achieved = std::max(achieved, Rational(abs(x)));
    }
    EXPECT_EQ(achieved, got);
    Rational best = -1;
    for (long a = -12; a <= 12; ++a)
      for (long b = -12; b <= 12; ++b)
        for (long c = -12; c <= 12; ++c) {
          if (!a && !b && !c) continue;
          Rational m = 0;
          for (int i = 0; i < 3; ++i) m = std::max(m, Rational(abs(a * rows[0][i] + b * rows[1][i] + c * rows[2][i])));
          if (best < 0 || m < best) best = m;
        }
    EXPECT_LE(got, best);
  }
}

TEST(ShortestVector, Scaling) {
  Rng rng(45);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<RationalVector> rows(2, RationalVector(2));
    for (auto& r : rows)
      for (auto& x : r) x = rng.rational(9, 5);
    if (determinant(rows) == 0) continue;
    Rational c = rng.rational(7, 3);
    if (c == 0) continue;
    auto scaled = rows;
    for (auto& r : scaled)
      for (auto& x : r) x *= c;
    EXPECT_EQ(shortest_vector(scaled, 1L << 30).norm, abs(c) * shortest_vector(rows, 1L << 30).norm);
  }
}

TEST(ShortestVector, GoldenOrbitStaysBounded) {
  const RationalVector y = {golden_number(60).value};
  for (int k = 1; k <= 40; k += 3) {
    DeltaResult d = flowed_delta(y, Rational(k) * Rational(481212, 1000000));  // about k log(phi)
    EXPECT_GT(d.delta.convert_to<double>(), 0.3) << "k=" << k;
  }
}

TEST(Minkowski, Examples) {
  MinkowskiResult r = minkowski_check(represent_subgroup({{5, 0, 0}}), {{5, 0, 0}});
  EXPECT_EQ(r.delta, 5);
  EXPECT_NEAR(r.ratio.convert_to<double>(), 1.0, 1e-12);
  MinkowskiResult r2 = minkowski_check(represent_subgroup({{1, 1, 0}, {0, 2, 0}}), {{1, 1, 0}, {0, 2, 0}});
  EXPECT_EQ(r2.delta, 1);
  EXPECT_NEAR(r2.ratio.convert_to<double>(), 1 / std::sqrt(2.0), 1e-12);
}

TEST(Minkowski, EmpiricalConstantIsFinite) {
  Rng rng(46);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<IntVector> b;
    do {
      b = {rng.int_vector(4, 9), rng.int_vector(4, 9)};
    } while (integer_rank(b) < 2);
    worst = std::max(worst, minkowski_check(represent_subgroup(b), b).ratio.convert_to<double>());
  }
  EXPECT_GT(worst, 0);
  EXPECT_LT(worst, 2.0);
}

TEST(Growth, RationalDecaysAtRateOne) {
  GrowthEstimate g = growth_exponent_estimate({Rational(3, 7)}, 40);
  EXPECT_GT(g.gamma_hat, 0.9);
  EXPECT_LE(g.gamma_hat, 1.0);
  ASSERT_EQ(g.delta_log_series.size(), 40u);
  // the integer vector (-3, 7) gives delta <= 7 e^{-t}
  for (const auto& [t, ld] : g.delta_log_series) EXPECT_LE(ld, std::log(7.0) - t + 1e-9);
}

TEST(Growth, GoldenIsFlat) {
  GrowthEstimate g = growth_exponent_estimate({golden_number(60).value}, 30);
  EXPECT_LE(g.gamma_hat, 0.05);
}

TEST(Growth, LiouvilleTailRate) {
  // best witness in range is q = 10^6 with |yq + p| about 10^{-18}: v = 3, gamma = 1/2
  GrowthEstimate g = growth_exponent_estimate({liouville_number(10, 5).value}, 40);
  EXPECT_GE(g.gamma_hat, 0.45);
  EXPECT_LE(g.gamma_hat, 0.55);
}

TEST(Growth, BoundedTimeComparability) {
  Rng rng(47);
  const double lo = std::exp(-2.0), hi = std::exp(2.0);
  for (int trial = 0; trial < 40; ++trial) {
    RationalVector y;
    const int n = static_cast<int>(rng.range(1, 2));
    for (int i = 0; i < n; ++i) y.push_back(rng.rational(50, 37));
    Rational t(rng.range(0, 60), 4);
    Rational dt(rng.range(1, 99), 100);
    double a = flowed_delta(y, t).delta.convert_to<double>();
    double b = flowed_delta(y, t + dt).delta.convert_to<double>();
    EXPECT_GE(b / a, lo);
    EXPECT_LE(b / a, hi);
    // the operator-norm bound: each coordinate moves by at most e^{dt}
    EXPECT_LE(b / a, std::exp(dt.convert_to<double>()) * (1 + 1e-12));
  }
}

TEST(FlowedLattice, ExactGridMatchesNaturalUnits) {
  const RationalVector y = {Rational(2, 9), Rational(-5, 11)};
  for (long k = 1; k <= 3; ++k) {
    LatticeBasis L = flowed_lattice_exact(y, 2, k);
    Rational exact = shortest_vector(L.rows, 1L << 40).norm;
    Rational t = Rational(2 * k);  // t = n k log 2 in units of log 2
    double natural = flowed_delta(y, t * Rational(693147180559945309LL, 1000000000000000000LL)).delta.convert_to<double>();
    EXPECT_NEAR(exact.convert_to<double>(), natural, 1e-9);
  }
}
