#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "extremal/diophantine.hpp"
#include "extremal/exterior_algebra.hpp"
#include "extremal/log_space.hpp"
#include "extremal/numeric.hpp"

namespace extremal {

// x ↦ (x, x̃A) with x̃ = (1, x); A is (s+1)×(n−s), first row a_0.
struct SubspaceSpec {
  int n = 2;
  int s = 1;
  RationalMatrix A;
  void validate() const;
};

enum class Verdict { kHoldsAtScale, kViolated };
const char* to_string(Verdict v);

struct Violation {
  int grade = 1;
  RationalVector w_coeffs;  // dense, lexicographic subset order
  std::optional<IndexSet> I;
  Rational lhs;
  Magnitude rhs;
  std::string note;
};

struct CriterionReport {
  std::string criterion;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json cutoffs = nlohmann::json::object();
  nlohmann::json search_space = nlohmann::json::object();
  Verdict verdict = Verdict::kHoldsAtScale;
  std::vector<Violation> violations;  // capped at max_recorded
  uint64_t violation_count = 0;
  uint64_t examined = 0;
  std::optional<uint64_t> seed;

  void add_violation(Violation v, size_t max_recorded = 64);
  nlohmann::json to_json() const;
};

// Enumeration of subgroup representatives -----------------------------------

enum class RepSource {
  kBasisBox,       // wedges of j vectors from [-B, B]^k
  kComplementBox,  // Hodge stars of wedges of k-j vectors from [-B, B]^k
};
const char* to_string(RepSource s);

struct EnumerateOptions {
  RepSource source = RepSource::kBasisBox;
  bool dedup = true;
  int workers = 1;  // partitions on the first tuple index; order of delivery is per worker
};

struct RepView {
  int k = 0;
  int j = 0;
  const int64_t* coeffs = nullptr;   // canonical sign, lexicographic order
  int size = 0;
  const int64_t* tuple = nullptr;    // the generating vectors (row-major)
  int tuple_count = 0;
  RepSource source = RepSource::kBasisBox;
  int worker = 0;
};

// Streams representatives; the callback returns false to stop early.
// With workers > 1 the callback runs concurrently (one thread per worker).
uint64_t enumerate_reps(int k, int j, int coeff_bound, const EnumerateOptions& options,
                        const std::function<bool(const RepView&)>& callback);
std::vector<SubgroupRep> enumerate_reps(int k, int j, int coeff_bound, const EnumerateOptions& options = {});
SubgroupRep materialize(const RepView& view);

// Saturated integer basis of {x in Z^k : rows · x = 0}.
std::vector<IntVector> integer_kernel_basis(const std::vector<IntVector>& rows, int k);

// Criteria ------------------------------------------------------------------

struct CriterionParams {
  Rational v;
  int j = 1;
  Rational N = 0;
  int coeff_bound = 3;
  RepSource source = RepSource::kBasisBox;
  std::optional<Rational> gamma;
  std::optional<Rational> beta;
  std::optional<Rational> T;
  std::vector<SubgroupRep> injected;
  int workers = 1;
};

CriterionReport check_4_3_iii(const SubspaceSpec& spec, const CriterionParams& params);

// Exhaustive simultaneous-approximation search, cross-checked against the
// linear-form inequality on the same (p, q); witnesses need ||q|| > N.
CriterionReport check_j1_reduction(const SubspaceSpec& spec, const Rational& v, long Q, long N = 1);

// All q with ||q|| <= Q whose nearest-integer p gives ||Aq + p|| <= size^{-v}.
std::vector<ApproxWitness> witnesses_at(const RationalMatrix& A, long Q, const Rational& v, ApproxMode mode,
                                        size_t max_count = 100000);

CriterionReport hyperplane_extremal_evidence(const RationalVector& a, long Q, const Rational& v,
                                             const std::vector<IntVector>& injected_q = {}, long N = 1);
CriterionReport line_origin_extremal_evidence(const RationalVector& b, long Q, const Rational& v,
                                              const std::vector<IntVector>& injected_q = {}, long N = 1);

// ||p + aq|| > Π_+(p', q)^{-v/n} for max(||p'||, |q|) > K.
CriterionReport check_5_6_iii(const RationalVector& a, long Q, const Rational& v, long K = 1,
                              const std::vector<BigInt>& injected_q = {});

struct StrongVerdict {
  int k = 0;
  int threshold = 1;            // k + 1
  int extremal_threshold = 1;   // n
  double omega_hat = 0;
  bool strongly_extremal_evidence = true;  // omega_hat <= k + 1
  bool extremal_evidence = true;           // omega_hat <= n
  ExponentEstimate estimate;
  nlohmann::json to_json() const;
};
StrongVerdict strong_hyperplane_verdict(const RationalVector& a, long Q, const std::vector<IntVector>& injected_q = {});

struct GridPoint {
  RationalVector t;  // in units of log(base)
};
struct FlowGridParams {
  Rational beta;
  Rational T = 0;
  Rational base = 2;
  int coeff_bound = 2;
  std::vector<int> grades;  // empty: 1..n
  std::vector<SubgroupRep> injected;
};
CriterionReport check_5_5_iv(const SubspaceSpec& spec, const std::vector<GridPoint>& grid, const FlowGridParams& params);

// Theorem-as-test suites ------------------------------------------------------

struct SuiteResult {
  uint64_t reps = 0;
  uint64_t checks = 0;
  uint64_t violations = 0;
  std::vector<std::string> first_violations;
};

// For every rep of grade j (coefficient box `coeff_bound`, given source) and
// every A in `matrices`: max_{0 in I} ||c+ + A c-|| >= 1, exactly.
SuiteResult lemma_suite(int n, int s, int j, int coeff_bound, RepSource source, const std::vector<RationalMatrix>& matrices,
                        int workers = 1);

// Random (s+1)×(n−s) rational matrix with entries num/den, |num/den| <= 8, den <= 64.
RationalMatrix random_rational_matrix(int rows, int cols, uint64_t& state);
uint64_t splitmix64(uint64_t& state);

}  // namespace extremal
