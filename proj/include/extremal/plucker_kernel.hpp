#pragma once

// Dense integer kernels for the exhaustive criterion suites. Coefficient
// arrays are indexed by j-subsets of {0,...,k-1} in lexicographic order (the
// same order as MultiVector::dense()). Everything here is exact integer
// arithmetic; the MultiVector path is the reference these are tested against.

#include <array>
#include <cstdint>
#include <vector>

#include "extremal/exterior_algebra.hpp"
#include "extremal/numeric.hpp"

namespace extremal::kernel {

using Int128 = __int128;

struct SubsetTable {
  int k = 0;
  int j = 0;
  std::vector<uint32_t> masks;        // lexicographic order
  std::vector<int> index_of_mask;     // size 2^k, -1 for other sizes
  int size() const { return static_cast<int>(masks.size()); }
};
const SubsetTable& subset_table(int k, int j);

// out[J] = sum_{i in J} sign * w[J \ {i}] * v[i]
struct WedgeStepPlan {
  struct Term {
    int from_index;
    int vector_index;
    int sign;
  };
  int from_grade = 0;
  int k = 0;
  std::vector<std::vector<Term>> terms;  // per target subset
};
const WedgeStepPlan& wedge_step_plan(int k, int from_grade);

template <class Int>
void wedge_step(const WedgeStepPlan& plan, const Int* w, const int64_t* v, Int* out) {
  for (size_t J = 0; J < plan.terms.size(); ++J) {
    Int acc = 0;
    for (const auto& t : plan.terms[J]) {
      Int prod = w[t.from_index] * static_cast<Int>(v[t.vector_index]);
      if (t.sign > 0) acc += prod; else acc -= prod;
    }
    out[J] = acc;
  }
}

// Wedge of `count` vectors of length k (row-major in `vectors`).
void wedge_vectors(int k, int count, const int64_t* vectors, int64_t* out);

// Returns -1 if negated to make the first nonzero entry positive, 0 if all zero, +1 otherwise.
template <class Int>
int canonicalize(Int* w, int size) {
  for (int i = 0; i < size; ++i) {
    if (w[i] == 0) continue;
    if (w[i] > 0) return 1;
    for (int t = i; t < size; ++t) w[t] = -w[t];
    return -1;
  }
  return 0;
}

// out[I^c] = sign(I, I^c) * w[I]
void hodge_star(int k, int grade, const int64_t* w, int64_t* out);

// Gather plan for c_{I,w} over all I containing 0, plus the indices of I not containing 0.
struct CPlan {
  struct Coord {
    int coeff_index;  // -1: coordinate is zero
    int sign;
  };
  int k = 0;
  int j = 0;
  std::vector<int> zero_sets;                  // subset indices (in table) of I with 0 in I
  std::vector<std::vector<Coord>> coords;      // per zero set, k coordinates
  std::vector<int> nonzero_sets;               // subset indices of I with 0 not in I
};
const CPlan& c_plan(int k, int j, bool flip_shuffle_parity = false);

// max_{0 notin I} |w_I|
template <class Int>
Int max_outer(const CPlan& plan, const Int* w) {
  Int m = 0;
  for (int idx : plan.nonzero_sets) {
    Int a = w[idx] < 0 ? Int(-w[idx]) : w[idx];
    if (a > m) m = a;
  }
  return m;
}

// Integer form of ||c+ + A c-|| with A = M / D: evaluates D * ||c+ + A c-||.
template <class Int>
struct AffineForm {
  int n = 0;
  int s = 0;
  Int D = 1;
  std::vector<Int> M;  // (s+1) x (n-s), row-major

  Int row_value(const std::vector<CPlan::Coord>& coords, const Int* w, int r) const {
    auto coord = [&](int i) -> Int {
      const auto& c = coords[i];
      if (c.coeff_index < 0) return Int(0);
      return c.sign > 0 ? w[c.coeff_index] : Int(-w[c.coeff_index]);
    };
    Int acc = D * coord(r);
    for (int col = 0; col < n - s; ++col) {
      const Int& a = M[r * (n - s) + col];
      if (a != 0) acc += a * coord(s + 1 + col);
    }
    return acc < 0 ? Int(-acc) : acc;
  }

  // D * ||c+_{I,w} + A c-_{I,w}|| for the zero set number `z` of the plan.
  Int norm_at(const CPlan& plan, int z, const Int* w) const {
    Int m = 0;
    for (int r = 0; r <= s; ++r) {
      Int v = row_value(plan.coords[z], w, r);
      if (v > m) m = v;
    }
    return m;
  }

  // D * max_{0 in I} ||c+ + A c-||; also reports the maximizing zero-set.
  Int max_norm(const CPlan& plan, const Int* w, int* argmax = nullptr) const {
    Int best = -1;
    for (size_t z = 0; z < plan.zero_sets.size(); ++z) {
      Int v = norm_at(plan, static_cast<int>(z), w);
      if (v > best) {
        best = v;
        if (argmax) *argmax = static_cast<int>(z);
      }
    }
    return best;
  }

  // Short-circuit test of max_{0 in I} ||c+ + A c-|| >= threshold / D.
  bool max_at_least(const CPlan& plan, const Int* w, const Int& threshold) const {
    for (size_t z = 0; z < plan.zero_sets.size(); ++z) {
      for (int r = 0; r <= s; ++r) {
        if (row_value(plan.coords[z], w, r) >= threshold) return true;
      }
    }
    return false;
  }
};

// Builds the integer form of A (common denominator D). Returns false if the
// entries do not fit the bound required for overflow-free Int128 evaluation
// with coefficients up to `max_coeff` in absolute value.
bool make_affine_form_128(int n, int s, const RationalMatrix& A, int64_t max_coeff, AffineForm<Int128>* out);
AffineForm<BigInt> make_affine_form_big(int n, int s, const RationalMatrix& A);

BigInt to_big(Int128 x);

}  // namespace extremal::kernel
