#include <gtest/gtest.h>

#include "extremal/exterior_algebra.hpp"
#include "extremal/plucker_kernel.hpp"
#include "test_support.hpp"

using namespace extremal;
using testing_support::Rng;

namespace {

std::vector<int64_t> random_vectors(Rng& rng, int k, int count, long bound) {
  std::vector<int64_t> v(static_cast<size_t>(k) * count);
  for (auto& x : v) x = rng.range(-bound, bound);
  return v;
}

MultiVector reference_wedge(int k, int count, const std::vector<int64_t>& v) {
  MultiVector w;
  for (int r = 0; r < count; ++r) {
    IntVector row;
    for (int c = 0; c < k; ++c) row.emplace_back(v[static_cast<size_t>(r) * k + c]);
    MultiVector m = MultiVector::from_vector(row);
    w = r == 0 ? m : wedge(w, m);
  }
  return w;
}

}  // namespace

TEST(PluckerKernel, SubsetTableIsLexicographic) {
  const auto& t = kernel::subset_table(4, 2);
  ASSERT_EQ(t.size(), 6);
  auto subsets = subsets_of_size(3, 2);
  for (int i = 0; i < t.size(); ++i) EXPECT_EQ(t.masks[i], subsets[i].mask());
}

TEST(PluckerKernel, WedgeMatchesMultiVector) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = static_cast<int>(rng.range(2, 6));
    const int count = static_cast<int>(rng.range(1, k - 1));
    auto v = random_vectors(rng, k, count, 7);
    const int size = kernel::subset_table(k, count).size();
    std::vector<int64_t> out(size);
    kernel::wedge_vectors(k, count, v.data(), out.data());
    RationalVector ref = reference_wedge(k, count, v).dense();
    if (ref.empty()) ref.assign(size, 0);
    for (int i = 0; i < size; ++i) EXPECT_EQ(Rational(out[i]), ref[i]);
  }
}

TEST(PluckerKernel, HodgeStarMatchesMultiVector) {
  Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = static_cast<int>(rng.range(2, 6));
    const int grade = static_cast<int>(rng.range(1, k - 1));
    auto v = random_vectors(rng, k, grade, 5);
    const int size = kernel::subset_table(k, grade).size();
    std::vector<int64_t> w(size), star(kernel::subset_table(k, k - grade).size());
    kernel::wedge_vectors(k, grade, v.data(), w.data());
    kernel::hodge_star(k, grade, w.data(), star.data());
    MultiVector ref = reference_wedge(k, grade, v);
    if (ref.is_zero()) continue;
    RationalVector expect = hodge_star(ref).dense();
    for (size_t i = 0; i < star.size(); ++i) EXPECT_EQ(Rational(star[i]), expect[i]);
  }
}

TEST(PluckerKernel, CPlanMatchesCVector) {
  Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.range(2, 4));
    const int k = n + 1;
    const int j = static_cast<int>(rng.range(1, n));
    auto v = random_vectors(rng, k, j, 4);
    MultiVector w = reference_wedge(k, j, v);
    if (w.is_zero()) continue;
    std::vector<int64_t> dense(kernel::subset_table(k, j).size());
    kernel::wedge_vectors(k, j, v.data(), dense.data());
    const auto& plan = kernel::c_plan(k, j);
    const auto& table = kernel::subset_table(k, j);
    for (size_t z = 0; z < plan.zero_sets.size(); ++z) {
      IndexSet I = IndexSet::from_mask(table.masks[plan.zero_sets[z]], n);
      RationalVector c = c_vector(I, w);
      for (int i = 0; i < k; ++i) {
        const auto& coord = plan.coords[z][i];
        Rational got = coord.coeff_index < 0 ? Rational(0) : Rational(coord.sign * dense[coord.coeff_index]);
        EXPECT_EQ(got, c[i]) << I.to_string() << " coordinate " << i;
      }
    }
  }
}

TEST(PluckerKernel, AffineFormMatchesRationalNorm) {
  Rng rng(34);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.range(2, 4));
    const int s = static_cast<int>(rng.range(1, n - 1));
    const int k = n + 1;
    const int j = static_cast<int>(rng.range(1, n));
    RationalMatrix A(s + 1, RationalVector(n - s));
    for (auto& row : A)
      for (auto& a : row) a = rng.rational(8, 12);
    auto v = random_vectors(rng, k, j, 4);
    MultiVector w = reference_wedge(k, j, v);
    if (w.is_zero()) continue;
    std::vector<int64_t> dense(kernel::subset_table(k, j).size());
    kernel::wedge_vectors(k, j, v.data(), dense.data());
    std::vector<BigInt> big(dense.begin(), dense.end());
    auto form = kernel::make_affine_form_big(n, s, A);
    const auto& plan = kernel::c_plan(k, j);
    Rational expect = -1;
    for (const auto& I : subsets_of_size(n, j)) {
      if (!I.contains(0)) continue;
      auto [cp, cm] = split_c(c_vector(I, w), s);
      for (int r = 0; r <= s; ++r) {
        Rational acc = cp[r];
        for (int c = 0; c < n - s; ++c) acc += A[r][c] * cm[c];
        expect = std::max(expect, Rational(abs(acc)));
      }
    }
    EXPECT_EQ(Rational(form.max_norm(plan, big.data())) / Rational(form.D), expect);
    kernel::AffineForm<kernel::Int128> f128;
    if (kernel::make_affine_form_128(n, s, A, 1000, &f128)) {
      std::vector<kernel::Int128> w128(dense.begin(), dense.end());
      EXPECT_EQ(kernel::to_big(f128.max_norm(plan, w128.data())), form.max_norm(plan, big.data()));
    }
  }
}

TEST(PluckerKernel, Canonicalize) {
  int64_t w[4] = {0, -3, 2, 0};
  EXPECT_EQ(kernel::canonicalize(w, 4), -1);
  EXPECT_EQ(w[1], 3);
  EXPECT_EQ(w[2], -2);
  int64_t z[2] = {0, 0};
  EXPECT_EQ(kernel::canonicalize(z, 2), 0);
}
