#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "extremal/exterior_algebra.hpp"
#include "test_support.hpp"

using namespace extremal;
using testing_support::Rng;

namespace {

IndexSet S(std::vector<int> m, int n) { return IndexSet(std::move(m), n); }

MultiVector vec(std::vector<long> v) {
  IntVector x;
  for (long c : v) x.emplace_back(c);
  return MultiVector::from_vector(x);
}

// Leibniz expansion, independent of the wedge code.
Rational det_oracle(const std::vector<IntVector>& m) {
  const int k = static_cast<int>(m.size());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  Rational total = 0;
  do {
    int inversions = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) inversions += perm[a] > perm[b];
    BigInt term = 1;
    for (int r = 0; r < k; ++r) term *= m[r][perm[r]];
    total += inversions % 2 ? -Rational(term) : Rational(term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace

TEST(Wedge, BasisAndAntisymmetry) {
  MultiVector e0 = MultiVector::basis(S({0}, 2)), e1 = MultiVector::basis(S({1}, 2));
  EXPECT_EQ(wedge(e0, e1), MultiVector::basis(S({0, 1}, 2)));
  EXPECT_EQ(wedge(e1, e0), -MultiVector::basis(S({0, 1}, 2)));
  EXPECT_EQ(wedge(e0 + e1, e0 - e1), MultiVector::basis(S({0, 1}, 2)).scaled(-2));
}

TEST(Wedge, MismatchedAmbientThrows) {
  EXPECT_THROW(wedge(MultiVector::basis(S({0}, 2)), MultiVector::basis(S({0}, 3))), Error);
}

TEST(Wedge, RandomAntisymmetryAndSquareZero) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.range(1, 5));
    MultiVector u = MultiVector::from_vector(rng.int_vector(n + 1, 9));
    MultiVector v = MultiVector::from_vector(rng.int_vector(n + 1, 9));
    EXPECT_EQ(wedge(u, v), -wedge(v, u));
    EXPECT_TRUE(wedge(u, u).is_zero());
  }
}

TEST(Wedge, AssociativeOnRandomTriples) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rng.range(2, 5));
    MultiVector a = MultiVector::from_vector(rng.int_vector(n + 1, 5));
    MultiVector b = MultiVector::from_vector(rng.int_vector(n + 1, 5));
    MultiVector c = MultiVector::from_vector(rng.int_vector(n + 1, 5));
    EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
  }
}

TEST(Wedge, FullGradeCoefficientIsDeterminant) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = static_cast<int>(rng.range(2, 5));
    std::vector<IntVector> m;
    MultiVector w;
    for (int r = 0; r < k; ++r) {
      m.push_back(rng.int_vector(k, 6));
      MultiVector v = MultiVector::from_vector(m.back());
      w = r == 0 ? v : wedge(w, v);
    }
    std::vector<int> all(k);
    std::iota(all.begin(), all.end(), 0);
    EXPECT_EQ(w.coefficient(IndexSet(all, k - 1)), det_oracle(m));
  }
}

TEST(RepresentSubgroup, Examples) {
  SubgroupRep r = represent_subgroup({{1, 0, 0}, {0, 1, 0}});
  EXPECT_EQ(r.multivector, MultiVector::basis(S({0, 1}, 2)));
  EXPECT_EQ(r.rank, 2);
  SubgroupRep r6 = represent_subgroup({{2, 0, 0}, {0, 3, 0}});
  EXPECT_EQ(r6.multivector.coefficient(S({0, 1}, 2)), 6);
  EXPECT_EQ(sup_norm(r6.multivector), 6);
}

TEST(RepresentSubgroup, Errors) {
  try {
    represent_subgroup({{1, 2, 3}, {2, 4, 6}});
    FAIL() << "dependent basis accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDependent);
  }
  EXPECT_THROW(represent_subgroup({}), Error);
  EXPECT_THROW(represent_subgroup({{1, 0}, {0, 1}}), Error);  // full rank excluded
}

TEST(RepresentSubgroup, UnimodularInvariance) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = static_cast<int>(rng.range(3, 5));
    std::vector<IntVector> b;
    do {
      b = {rng.int_vector(k, 5), rng.int_vector(k, 5)};
    } while (integer_rank(b) < 2);
    // elementary row operations and a swap
    const BigInt c = rng.range(-4, 4);
    std::vector<IntVector> ub = {b[1], b[0]};
    for (int i = 0; i < k; ++i) ub[0][i] += c * ub[1][i];
    SubgroupRep r1 = represent_subgroup(b), r2 = represent_subgroup(ub);
    EXPECT_TRUE(r1.multivector == r2.multivector || r1.multivector == -r2.multivector);
    EXPECT_EQ(sup_norm(r1.multivector), sup_norm(r2.multivector));
  }
}

TEST(SupNorm, Examples) {
  MultiVector w(2, 2);
  w.set(S({0, 1}, 2), 3);
  w.set(S({0, 2}, 2), -5);
  EXPECT_EQ(sup_norm(w), 5);
  EXPECT_EQ(sup_norm(MultiVector(2, 2)), 0);
  EXPECT_EQ(w.to_string(), "w = 3*e{0,1} - 5*e{0,2}");
}

TEST(ShuffleCount, Examples) {
  EXPECT_EQ(shuffle_count(S({0, 2, 5}, 5), 3), 1);
  EXPECT_EQ(shuffle_count(S({0}, 5), 4), 0);
  EXPECT_EQ(shuffle_count(S({0, 1, 2, 3}, 5), 5), 3);
}

TEST(CVector, GradeOneIsTheVector) {
  MultiVector v = vec({4, -1, 7});
  EXPECT_EQ(c_vector(S({0}, 2), v), (RationalVector{4, -1, 7}));
}

TEST(CVector, CoordinatesOfGradeTwoInThreeSpace) {
  // w = w0 e_{J0} + w1 e_{J1} + w2 e_{J2}, J_i = {0,1,2} \ {i}
  MultiVector w(2, 2);
  w.set(S({1, 2}, 2), 5);   // w0
  w.set(S({0, 2}, 2), 7);   // w1
  w.set(S({0, 1}, 2), 11);  // w2
  EXPECT_EQ(c_vector(S({0, 2}, 2), w), (RationalVector{7, 5, 0}));
  EXPECT_EQ(c_vector(S({0, 1}, 2), w), (RationalVector{11, 0, -5}));
}

TEST(CVector, GradeNFormulaForAllSmallAmbients) {
  Rng rng(15);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      MultiVector w(n, n);
      std::vector<Rational> wi(n + 1);
      for (int i = 0; i <= n; ++i) {
        IndexSet J = S({i}, n).complement();
        wi[i] = rng.rational(20, 5);
        w.set(J, wi[i]);
      }
      for (int i = 1; i <= n; ++i) {
        RationalVector expect(n + 1, 0);
        expect[0] = wi[i];
        expect[i] = (i - 1) % 2 == 0 ? wi[0] : -wi[0];
        EXPECT_EQ(c_vector(S({i}, n).complement(), w), expect) << "n=" << n << " i=" << i;
      }
    }
  }
}

TEST(CVector, Linearity) {
  Rng rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3;
    MultiVector u = wedge(MultiVector::from_vector(rng.int_vector(4, 4)), MultiVector::from_vector(rng.int_vector(4, 4)));
    MultiVector v = wedge(MultiVector::from_vector(rng.int_vector(4, 4)), MultiVector::from_vector(rng.int_vector(4, 4)));
    if (u.is_zero() || v.is_zero()) continue;
    Rational a = rng.rational(5, 3), b = rng.rational(5, 3);
    for (const auto& I : subsets_of_size(n, 2)) {
      if (!I.contains(0)) continue;
      RationalVector lhs = c_vector(I, u.scaled(a) + v.scaled(b));
      RationalVector cu = c_vector(I, u), cv = c_vector(I, v);
      for (int i = 0; i <= n; ++i) EXPECT_EQ(lhs[i], a * cu[i] + b * cv[i]);
    }
  }
}

TEST(CVector, Errors) {
  MultiVector w = vec({1, 2, 3});
  EXPECT_THROW(c_vector(S({1}, 2), w), Error);
  EXPECT_THROW(c_vector(S({0, 1}, 2), w), Error);
}

TEST(SplitC, Examples) {
  auto [p, m] = split_c({1, 2, 3}, 1);
  EXPECT_EQ(p, (RationalVector{1, 2}));
  EXPECT_EQ(m, (RationalVector{3}));
  auto [p2, m2] = split_c({1, 2, 3}, 2);
  EXPECT_EQ(p2, (RationalVector{1, 2, 3}));
  EXPECT_TRUE(m2.empty());
  auto [pp, qq] = split_c(c_vector(S({0}, 3), vec({2, -3, 5, 8})), 1);
  EXPECT_EQ(pp, (RationalVector{2, -3}));
  EXPECT_EQ(qq, (RationalVector{5, 8}));
}

TEST(Canonicalize, FirstNonzeroPositive) {
  MultiVector w = vec({0, -2, 3});
  EXPECT_EQ(canonicalize_sign(w), -1);
  EXPECT_EQ(w, vec({0, 2, -3}));
  EXPECT_EQ(canonicalize_sign(w), 1);
}
