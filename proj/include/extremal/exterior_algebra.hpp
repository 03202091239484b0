#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "extremal/numeric.hpp"

namespace extremal {

// Subset of {0,...,n}. Ordered lexicographically on the sorted member list,
// which is the order used for sign canonicalization and serialization.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::vector<int> members, int ambient_n);
  static IndexSet from_mask(uint32_t mask, int ambient_n);

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  int ambient_n() const { return ambient_n_; }
  uint32_t mask() const { return mask_; }
  bool contains(int i) const { return i >= 0 && i < 32 && ((mask_ >> i) & 1u); }
  IndexSet with(int i) const;
  IndexSet without(int i) const;
  IndexSet complement() const;

  std::strong_ordering operator<=>(const IndexSet& other) const;
  bool operator==(const IndexSet& other) const { return mask_ == other.mask_ && ambient_n_ == other.ambient_n_; }
  std::string to_string() const;  // "{0,2}"

 private:
  std::vector<int> members_;
  int ambient_n_ = 0;
  uint32_t mask_ = 0;
};

// All j-subsets of {0,...,n}, in lexicographic order.
std::vector<IndexSet> subsets_of_size(int ambient_n, int j);

class MultiVector {
 public:
  using Coefficients = std::map<IndexSet, Rational>;

  MultiVector() = default;
  MultiVector(int ambient_n, int grade);
  static MultiVector basis(const IndexSet& I);
  static MultiVector from_vector(const RationalVector& v);  // grade 1 over n = v.size()-1
  static MultiVector from_vector(const IntVector& v);

  int ambient_n() const { return ambient_n_; }
  int grade() const { return grade_; }
  const Coefficients& coefficients() const { return coefficients_; }
  Rational coefficient(const IndexSet& I) const;
  void set(const IndexSet& I, const Rational& value);
  void add(const IndexSet& I, const Rational& value);
  bool is_zero() const { return coefficients_.empty(); }
  bool is_integral() const;

  MultiVector operator+(const MultiVector& other) const;
  MultiVector operator-(const MultiVector& other) const;
  MultiVector operator-() const;
  MultiVector scaled(const Rational& factor) const;
  bool operator==(const MultiVector& other) const;

  // Dense coefficient list in lexicographic subset order.
  RationalVector dense() const;
  std::string to_string() const;  // "w = 3*e{0,1} - 5*e{0,2}"

 private:
  void check_key(const IndexSet& I) const;
  int ambient_n_ = 0;
  int grade_ = 0;
  Coefficients coefficients_;
};

MultiVector wedge(const MultiVector& u, const MultiVector& v);
// Sign (+1/-1) of e_I ∧ e_J relative to e_{I∪J}; 0 when I and J intersect.
int wedge_sign(const IndexSet& I, const IndexSet& J);
// Hodge-type complement: e_I -> sign(I, I^c) e_{I^c}.
MultiVector hodge_star(const MultiVector& w);

struct SubgroupRep {
  MultiVector multivector;
  int rank = 0;
  std::optional<std::vector<IntVector>> source_basis;
};

// Makes the first nonzero coefficient (lexicographic order) positive.
// Returns -1 if the sign was flipped, +1 otherwise.
int canonicalize_sign(MultiVector& w);
SubgroupRep represent_subgroup(const std::vector<IntVector>& basis);
int integer_rank(const std::vector<IntVector>& vectors);

Rational sup_norm(const MultiVector& w);
// l(I, i) = #{m in I : 0 < m < i}
int shuffle_count(const IndexSet& I, int i);
RationalVector c_vector(const IndexSet& I, const MultiVector& w);
std::pair<RationalVector, RationalVector> split_c(const RationalVector& c, int s);

}  // namespace extremal
