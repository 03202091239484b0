#include "extremal/exterior_algebra.hpp"

#include <algorithm>
#include <sstream>

namespace extremal {

IndexSet::IndexSet(std::vector<int> members, int ambient_n) : ambient_n_(ambient_n) {
  require(ambient_n >= 0 && ambient_n < 31, ErrorCode::kInvalidArgument, "ambient n out of range");
  std::sort(members.begin(), members.end());
  for (size_t i = 0; i < members.size(); ++i) {
    int m = members[i];
    require(m >= 0 && m <= ambient_n, ErrorCode::kInvalidArgument,
            "index " + std::to_string(m) + " outside {0,...," + std::to_string(ambient_n) + "}");
    require(i == 0 || members[i - 1] != m, ErrorCode::kInvalidArgument, "duplicate index in set");
    mask_ |= 1u << m;
  }
  members_ = std::move(members);
}

IndexSet IndexSet::from_mask(uint32_t mask, int ambient_n) {
  std::vector<int> members;
  for (int i = 0; i <= ambient_n; ++i) {
    if ((mask >> i) & 1u) members.push_back(i);
  }
  require((mask >> (ambient_n + 1)) == 0, ErrorCode::kInvalidArgument, "mask exceeds ambient dimension");
  return IndexSet(std::move(members), ambient_n);
}

IndexSet IndexSet::with(int i) const { return from_mask(mask_ | (1u << i), ambient_n_); }
IndexSet IndexSet::without(int i) const { return from_mask(mask_ & ~(1u << i), ambient_n_); }
IndexSet IndexSet::complement() const {
  uint32_t full = (ambient_n_ + 1 >= 32) ? ~0u : ((1u << (ambient_n_ + 1)) - 1);
  return from_mask(full & ~mask_, ambient_n_);
}

std::strong_ordering IndexSet::operator<=>(const IndexSet& other) const {
  if (auto c = ambient_n_ <=> other.ambient_n_; c != 0) return c;
  return std::lexicographical_compare_three_way(members_.begin(), members_.end(), other.members_.begin(),
                                                other.members_.end());
}

std::string IndexSet::to_string() const {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < members_.size(); ++i) os << (i ? "," : "") << members_[i];
  os << "}";
  return os.str();
}

std::vector<IndexSet> subsets_of_size(int ambient_n, int j) {
  std::vector<IndexSet> out;
  int k = ambient_n + 1;
  if (j < 0 || j > k) return out;
  std::vector<int> idx(j);
  for (int i = 0; i < j; ++i) idx[i] = i;
  while (true) {
    out.emplace_back(idx, ambient_n);
    int pos = j - 1;
    while (pos >= 0 && idx[pos] == k - j + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < j; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

MultiVector::MultiVector(int ambient_n, int grade) : ambient_n_(ambient_n), grade_(grade) {
  require(ambient_n >= 0 && ambient_n < 31, ErrorCode::kInvalidArgument, "ambient n out of range");
  require(grade >= 0, ErrorCode::kInvalidArgument, "negative grade");
}

MultiVector MultiVector::basis(const IndexSet& I) {
  MultiVector w(I.ambient_n(), I.size());
  w.set(I, 1);
  return w;
}

MultiVector MultiVector::from_vector(const RationalVector& v) {
  require(!v.empty(), ErrorCode::kInvalidArgument, "empty vector");
  int n = static_cast<int>(v.size()) - 1;
  MultiVector w(n, 1);
  for (int i = 0; i <= n; ++i) w.set(IndexSet({i}, n), v[i]);
  return w;
}

MultiVector MultiVector::from_vector(const IntVector& v) {
  RationalVector r(v.begin(), v.end());
  return from_vector(r);
}

void MultiVector::check_key(const IndexSet& I) const {
  require(I.ambient_n() == ambient_n_, ErrorCode::kDimensionMismatch, "index set ambient dimension mismatch");
  require(I.size() == grade_, ErrorCode::kDimensionMismatch,
          "index set " + I.to_string() + " does not match grade " + std::to_string(grade_));
}

Rational MultiVector::coefficient(const IndexSet& I) const {
  check_key(I);
  auto it = coefficients_.find(I);
  return it == coefficients_.end() ? Rational(0) : it->second;
}

void MultiVector::set(const IndexSet& I, const Rational& value) {
  check_key(I);
  if (value == 0) {
    coefficients_.erase(I);
  } else {
    coefficients_[I] = value;
  }
}

void MultiVector::add(const IndexSet& I, const Rational& value) {
  check_key(I);
  if (value == 0) return;
  auto [it, inserted] = coefficients_.emplace(I, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) coefficients_.erase(it);
  }
}

bool MultiVector::is_integral() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(),
                     [](const auto& kv) { return denominator(kv.second) == 1; });
}

MultiVector MultiVector::operator+(const MultiVector& other) const {
  require(ambient_n_ == other.ambient_n_ && grade_ == other.grade_, ErrorCode::kDimensionMismatch,
          "adding multivectors of different shape");
  MultiVector r = *this;
  for (const auto& [I, c] : other.coefficients_) r.add(I, c);
  return r;
}

MultiVector MultiVector::operator-() const { return scaled(-1); }
MultiVector MultiVector::operator-(const MultiVector& other) const { return *this + (-other); }

MultiVector MultiVector::scaled(const Rational& factor) const {
  MultiVector r(ambient_n_, grade_);
  if (factor == 0) return r;
  for (const auto& [I, c] : coefficients_) r.coefficients_[I] = c * factor;
  return r;
}

bool MultiVector::operator==(const MultiVector& other) const {
  return ambient_n_ == other.ambient_n_ && grade_ == other.grade_ && coefficients_ == other.coefficients_;
}

RationalVector MultiVector::dense() const {
  RationalVector out;
  for (const auto& I : subsets_of_size(ambient_n_, grade_)) out.push_back(coefficient(I));
  return out;
}

std::string MultiVector::to_string() const {
  std::ostringstream os;
  os << "w = ";
  if (coefficients_.empty()) {
    os << "0";
    return os.str();
  }
  bool first = true;
  for (const auto& [I, c] : coefficients_) {
    Rational a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (a != 1) os << extremal::to_string(a) << "*";
    os << "e" << I.to_string();
  }
  return os.str();
}

int wedge_sign(const IndexSet& I, const IndexSet& J) {
  if (I.mask() & J.mask()) return 0;
  // number of pairs (i in I, j in J) with i > j
  int inversions = 0;
  for (int i : I.members()) {
    for (int j : J.members()) {
      if (i > j) ++inversions;
    }
  }
  return (inversions % 2) ? -1 : 1;
}

MultiVector wedge(const MultiVector& u, const MultiVector& v) {
  require(u.ambient_n() == v.ambient_n(), ErrorCode::kDimensionMismatch, "wedge: mismatched ambient dimension");
  MultiVector r(u.ambient_n(), u.grade() + v.grade());
  if (u.grade() + v.grade() > u.ambient_n() + 1) return r;
  for (const auto& [I, a] : u.coefficients()) {
    for (const auto& [J, b] : v.coefficients()) {
      int sign = wedge_sign(I, J);
      if (sign == 0) continue;
      r.add(IndexSet::from_mask(I.mask() | J.mask(), u.ambient_n()), sign > 0 ? Rational(a * b) : Rational(-a * b));
    }
  }
  return r;
}

MultiVector hodge_star(const MultiVector& w) {
  MultiVector r(w.ambient_n(), w.ambient_n() + 1 - w.grade());
  for (const auto& [I, c] : w.coefficients()) {
    IndexSet C = I.complement();
    r.set(C, wedge_sign(I, C) > 0 ? c : Rational(-c));
  }
  return r;
}

int canonicalize_sign(MultiVector& w) {
  if (w.is_zero()) return 1;
  if (w.coefficients().begin()->second > 0) return 1;
  w = -w;
  return -1;
}

int integer_rank(const std::vector<IntVector>& vectors) {
  if (vectors.empty()) return 0;
  std::vector<RationalVector> m;
  for (const auto& v : vectors) m.emplace_back(v.begin(), v.end());
  int rows = static_cast<int>(m.size()), cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (m[r][c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[pivot], m[rank]);
    for (int r = rank + 1; r < rows; ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (int cc = c; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
    }
    ++rank;
  }
  return rank;
}

SubgroupRep represent_subgroup(const std::vector<IntVector>& basis) {
  require(!basis.empty(), ErrorCode::kInvalidArgument, "empty basis");
  const int k = static_cast<int>(basis[0].size());
  require(k >= 2, ErrorCode::kInvalidArgument, "ambient dimension must be at least 2");
  for (const auto& v : basis) {
    require(static_cast<int>(v.size()) == k, ErrorCode::kDimensionMismatch, "basis vectors of unequal length");
  }
  const int j = static_cast<int>(basis.size());
  require(j <= k - 1, ErrorCode::kInvalidArgument, "full-rank subgroups are excluded (j = n+1)");
  require(integer_rank(basis) == j, ErrorCode::kDependent, "linearly dependent basis");
  MultiVector w = MultiVector::from_vector(basis[0]);
  for (int i = 1; i < j; ++i) w = wedge(w, MultiVector::from_vector(basis[i]));
  std::vector<IntVector> source = basis;
  if (canonicalize_sign(w) < 0) {
    for (auto& x : source[0]) x = -x;
  }
  return SubgroupRep{std::move(w), j, std::move(source)};
}

Rational sup_norm(const MultiVector& w) {
  Rational m = 0;
  for (const auto& [I, c] : w.coefficients()) m = std::max(m, Rational(abs(c)));
  return m;
}

int shuffle_count(const IndexSet& I, int i) {
  int count = 0;
  for (int m : I.members()) {
    if (m > 0 && m < i) ++count;
  }
  return count;
}

RationalVector c_vector(const IndexSet& I, const MultiVector& w) {
  require(I.contains(0), ErrorCode::kInvalidArgument, "c_vector requires 0 in I");
  require(I.size() == w.grade(), ErrorCode::kDimensionMismatch, "c_vector: |I| must equal the grade of w");
  require(I.ambient_n() == w.ambient_n(), ErrorCode::kDimensionMismatch, "c_vector: ambient mismatch");
  const int n = w.ambient_n();
  RationalVector c(n + 1, Rational(0));
  c[0] = w.coefficient(I);
  for (int i = 1; i <= n; ++i) {
    if (I.contains(i)) continue;
    Rational value = w.coefficient(I.with(i).without(0));
    c[i] = (shuffle_count(I, i) % 2) ? Rational(-value) : value;
  }
  return c;
}

std::pair<RationalVector, RationalVector> split_c(const RationalVector& c, int s) {
  const int n = static_cast<int>(c.size()) - 1;
  require(s >= 0 && s <= n, ErrorCode::kInvalidArgument, "split_c: s out of range");
  return {RationalVector(c.begin(), c.begin() + s + 1), RationalVector(c.begin() + s + 1, c.end())};
}

}  // namespace extremal
