#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "extremal/extremality_criteria.hpp"
#include "extremal/numeric.hpp"

namespace extremal {

struct SelftestOptions {
  bool reduced = false;
  bool mutate_shuffle_sign = false;  // corrupts the shuffle-sign convention of the flow action; the oracle suite must fail
  int workers = 1;
  uint64_t seed = 1;
};

struct SuiteOutcome {
  std::string name;
  bool pass = true;
  uint64_t checks = 0;
  std::string detail;
};

struct SelftestReport {
  std::vector<SuiteOutcome> suites;
  bool all_pass() const;
  std::string to_text() const;
  nlohmann::json to_json() const;
};

SelftestReport run_selftest(const SelftestOptions& options);

// Individual suites, shared with the acceptance binary.
struct LemmaSuitePlan {
  std::vector<int> ns;
  int coeff_bound = 2;
  int matrices = 3;
};
SuiteOutcome lemma45_suite(const LemmaSuitePlan& plan, uint64_t seed, int workers);
SuiteOutcome lemma46_suite(const LemmaSuitePlan& plan, uint64_t seed, int workers);
// Random reps (n <= max_n, integer bases in [-basis_bound, basis_bound]) and random rational y.
SuiteOutcome flow_oracle_suite(int cases, int max_n, int basis_bound, uint64_t seed, bool mutate);

struct RoundTripPlan {
  int cases = 20;
  int max_n = 3;
  std::vector<long> Q_by_n = {200, 200, 40};  // Q for n = 1, 2, 3
  long k_max = 6;
};
SuiteOutcome lemma21_roundtrip_suite(const RoundTripPlan& plan, uint64_t seed);

// Random rational vector with entries num/den, den in [1, max_den], |value| < 1 (shifted into (0,1) when positive).
RationalVector random_rational_point(int n, long max_den, uint64_t& state);

}  // namespace extremal
