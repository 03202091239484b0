#include "extremal/plucker_kernel.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace extremal::kernel {

namespace {

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

int popcount(uint32_t x) { return __builtin_popcount(x); }

// #{m in mask : m > i}
int count_above(uint32_t mask, int i) { return popcount(mask >> (i + 1)); }

}  // namespace

const SubsetTable& subset_table(int k, int j) {
  static std::map<std::pair<int, int>, std::unique_ptr<SubsetTable>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto& slot = cache[{k, j}];
  if (!slot) {
    require(k >= 1 && k <= 16, ErrorCode::kInvalidArgument, "subset table: k out of range");
    auto t = std::make_unique<SubsetTable>();
    t->k = k;
    t->j = j;
    t->index_of_mask.assign(size_t(1) << k, -1);
    for (const auto& I : subsets_of_size(k - 1, j)) {
      t->index_of_mask[I.mask()] = static_cast<int>(t->masks.size());
      t->masks.push_back(I.mask());
    }
    slot = std::move(t);
  }
  return *slot;
}

const WedgeStepPlan& wedge_step_plan(int k, int from_grade) {
  static std::map<std::pair<int, int>, std::unique_ptr<WedgeStepPlan>> cache;
  const SubsetTable& from = subset_table(k, from_grade);
  const SubsetTable& to = subset_table(k, from_grade + 1);
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto& slot = cache[{k, from_grade}];
  if (!slot) {
    auto p = std::make_unique<WedgeStepPlan>();
    p->k = k;
    p->from_grade = from_grade;
    for (uint32_t J : to.masks) {
      std::vector<WedgeStepPlan::Term> terms;
      for (int i = 0; i < k; ++i) {
        if (!((J >> i) & 1u)) continue;
        uint32_t I = J & ~(1u << i);
        // e_I ∧ e_i = (-1)^{#{m in I : m > i}} e_J
        int sign = (count_above(I, i) % 2) ? -1 : 1;
        terms.push_back({from.index_of_mask[I], i, sign});
      }
      p->terms.push_back(std::move(terms));
    }
    slot = std::move(p);
  }
  return *slot;
}

void wedge_vectors(int k, int count, const int64_t* vectors, int64_t* out) {
  require(count >= 1 && count <= k, ErrorCode::kInvalidArgument, "wedge_vectors: bad count");
  std::vector<int64_t> cur(vectors, vectors + k), next;
  for (int g = 1; g < count; ++g) {
    const WedgeStepPlan& plan = wedge_step_plan(k, g);
    next.assign(plan.terms.size(), 0);
    wedge_step<int64_t>(plan, cur.data(), vectors + g * k, next.data());
    cur.swap(next);
  }
  std::copy(cur.begin(), cur.end(), out);
}

void hodge_star(int k, int grade, const int64_t* w, int64_t* out) {
  const SubsetTable& from = subset_table(k, grade);
  const SubsetTable& to = subset_table(k, k - grade);
  uint32_t full = (1u << k) - 1;
  for (int idx = 0; idx < from.size(); ++idx) {
    uint32_t I = from.masks[idx], C = full & ~I;
    int inversions = 0;
    for (int i = 0; i < k; ++i) {
      if ((I >> i) & 1u) inversions += popcount(C & ((1u << i) - 1));
    }
    out[to.index_of_mask[C]] = (inversions % 2) ? -w[idx] : w[idx];
  }
}

const CPlan& c_plan(int k, int j, bool flip_shuffle_parity) {
  static std::map<std::tuple<int, int, bool>, std::unique_ptr<CPlan>> cache;
  const SubsetTable& table = subset_table(k, j);
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto& slot = cache[{k, j, flip_shuffle_parity}];
  if (!slot) {
    auto p = std::make_unique<CPlan>();
    p->k = k;
    p->j = j;
    for (int idx = 0; idx < table.size(); ++idx) {
      uint32_t I = table.masks[idx];
      if (!(I & 1u)) {
        p->nonzero_sets.push_back(idx);
        continue;
      }
      p->zero_sets.push_back(idx);
      std::vector<CPlan::Coord> coords(k, CPlan::Coord{-1, 1});
      coords[0] = {idx, 1};
      for (int i = 1; i < k; ++i) {
        if ((I >> i) & 1u) continue;
        uint32_t target = (I | (1u << i)) & ~1u;
        // l(I,i): members of I strictly between 0 and i
        int l = popcount(I & ((1u << i) - 1) & ~1u);
        if (flip_shuffle_parity) ++l;
        coords[i] = {table.index_of_mask[target], (l % 2) ? -1 : 1};
      }
      p->coords.push_back(std::move(coords));
    }
    slot = std::move(p);
  }
  return *slot;
}

BigInt to_big(Int128 x) {
  bool neg = x < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
  uint64_t hi = static_cast<uint64_t>(u >> 64), lo = static_cast<uint64_t>(u);
  BigInt r = BigInt(hi);
  r <<= 64;
  r += BigInt(lo);
  return neg ? BigInt(-r) : r;
}

namespace {

void common_denominator(int n, int s, const RationalMatrix& A, BigInt* D, std::vector<BigInt>* M) {
  require(static_cast<int>(A.size()) == s + 1, ErrorCode::kDimensionMismatch, "A must have s+1 rows");
  *D = 1;
  for (const auto& row : A) {
    require(static_cast<int>(row.size()) == n - s, ErrorCode::kDimensionMismatch, "A must have n-s columns");
    for (const auto& a : row) *D = lcm_of(*D, denominator(a));
  }
  M->clear();
  for (const auto& row : A) {
    for (const auto& a : row) M->push_back(numerator(a) * (*D / denominator(a)));
  }
}

}  // namespace

bool make_affine_form_128(int n, int s, const RationalMatrix& A, int64_t max_coeff, AffineForm<Int128>* out) {
  BigInt D;
  std::vector<BigInt> M;
  common_denominator(n, s, A, &D, &M);
  BigInt bound = D;
  for (const auto& m : M) bound = std::max(bound, BigInt(abs(m)));
  // row value <= (1 + (n - s)) * bound * max_coeff must stay well below 2^126
  BigInt limit = BigInt(1) << 120;
  if (bound * BigInt(max_coeff) * BigInt(n + 1) >= limit) return false;
  out->n = n;
  out->s = s;
  auto to128 = [](const BigInt& b) {
    BigInt a = abs(b);
    Int128 v = static_cast<Int128>(static_cast<uint64_t>((a >> 64).convert_to<unsigned long long>())) << 64;
    v += static_cast<Int128>(static_cast<uint64_t>((a & BigInt("18446744073709551615")).convert_to<unsigned long long>()));
    return b < 0 ? Int128(-v) : v;
  };
  out->D = to128(D);
  out->M.clear();
  for (const auto& m : M) out->M.push_back(to128(m));
  return true;
}

AffineForm<BigInt> make_affine_form_big(int n, int s, const RationalMatrix& A) {
  AffineForm<BigInt> f;
  f.n = n;
  f.s = s;
  common_denominator(n, s, A, &f.D, &f.M);
  return f;
}

}  // namespace extremal::kernel
