#include "extremal/selftest.hpp"

#include <sstream>

#include "extremal/diophantine.hpp"
#include "extremal/lattice_flow.hpp"
#include "extremal/oracles.hpp"

namespace extremal {

namespace {

// literal tuples when they are the shorter description, Hodge complements otherwise
RepSource source_for(int n, int j) {
  const int k = n + 1;
  if (n == 2 || j <= k - j) return RepSource::kBasisBox;
  return RepSource::kComplementBox;
}

std::string suite_detail(int n, int s, int j, const SuiteResult& r) {
  std::ostringstream os;
  os << "n=" << n << " s=" << s << " j=" << j << " reps=" << r.reps << " checks=" << r.checks
     << " violations=" << r.violations;
  return os.str();
}

void absorb(SuiteOutcome& out, int n, int s, int j, const SuiteResult& r) {
  out.checks += r.checks;
  if (!out.detail.empty()) out.detail += "; ";
  out.detail += suite_detail(n, s, j, r);
  if (r.violations > 0 || r.reps == 0) {
    out.pass = false;
    for (const auto& v : r.first_violations) out.detail += "; " + v;
  }
}

long uniform(uint64_t& state, long lo, long hi) {
  return lo + static_cast<long>(splitmix64(state) % static_cast<uint64_t>(hi - lo + 1));
}

}  // namespace

bool SelftestReport::all_pass() const {
  for (const auto& s : suites) {
    if (!s.pass) return false;
  }
  return !suites.empty();
}

std::string SelftestReport::to_text() const {
  std::ostringstream os;
  for (const auto& s : suites) {
    os << (s.pass ? "PASS " : "FAIL ") << s.name << " (" << s.checks << " checks)";
    if (!s.detail.empty()) os << ": " << s.detail;
    os << "\n";
  }
  os << (all_pass() ? "selftest: all suites passed" : "selftest: FAILED") << "\n";
  return os.str();
}

nlohmann::json SelftestReport::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : suites) {
    j.push_back({{"suite", s.name}, {"pass", s.pass}, {"checks", s.checks}, {"detail", s.detail}});
  }
  return {{"suites", j}, {"all_pass", all_pass()}};
}

RationalVector random_rational_point(int n, long max_den, uint64_t& state) {
  RationalVector y;
  for (int i = 0; i < n; ++i) {
    const long den = uniform(state, 1, max_den);
    const long num = uniform(state, -(den - 1), den - 1);
    y.emplace_back(num, den);
  }
  return y;
}

SuiteOutcome lemma45_suite(const LemmaSuitePlan& plan, uint64_t seed, int workers) {
  SuiteOutcome out;
  out.name = "rank-n-exhaustive";
  uint64_t state = seed;
  for (int n : plan.ns) {
    for (int s = 1; s < n; ++s) {
      std::vector<RationalMatrix> mats;
      for (int m = 0; m < plan.matrices; ++m) mats.push_back(random_rational_matrix(s + 1, n - s, state));
      absorb(out, n, s, n, lemma_suite(n, s, n, plan.coeff_bound, source_for(n, n), mats, workers));
    }
  }
  return out;
}

SuiteOutcome lemma46_suite(const LemmaSuitePlan& plan, uint64_t seed, int workers) {
  SuiteOutcome out;
  out.name = "column-matrix-exhaustive";
  uint64_t state = seed ^ 0x46;
  for (int n : plan.ns) {
    const int s = n - 1;
    for (int j = 2; j <= n; ++j) {
      std::vector<RationalMatrix> mats;
      for (int m = 0; m < plan.matrices; ++m) mats.push_back(random_rational_matrix(s + 1, n - s, state));
      absorb(out, n, s, j, lemma_suite(n, s, j, plan.coeff_bound, source_for(n, j), mats, workers));
    }
  }
  return out;
}

SuiteOutcome flow_oracle_suite(int cases, int max_n, int basis_bound, uint64_t seed, bool mutate) {
  SuiteOutcome out;
  out.name = "flow-oracle";
  uint64_t state = seed ^ 0x29;
  FlowOptions options;
  options.flip_shuffle_parity = mutate;
  int mismatches = 0;
  for (int c = 0; c < cases; ++c) {
    const int n = static_cast<int>(uniform(state, 1, max_n));
    const int j = static_cast<int>(uniform(state, 1, n));
    std::vector<IntVector> basis;
    do {
      basis.clear();
      for (int r = 0; r < j; ++r) {
        IntVector v;
        for (int i = 0; i <= n; ++i) v.emplace_back(uniform(state, -basis_bound, basis_bound));
        basis.push_back(std::move(v));
      }
    } while (integer_rank(basis) < j);
    RationalVector y;
    for (int i = 0; i < n; ++i) {
      Rational yi(uniform(state, -20, 20), uniform(state, 1, 12));
      if (yi == 0) yi = Rational(1, 7);  // nonzero y keeps the off-diagonal terms live
      y.push_back(yi);
    }
    SubgroupRep rep = represent_subgroup(basis);
    OracleComparison cmp = compare_flow_with_oracle(y, rep, options);
    out.checks += static_cast<uint64_t>(cmp.compared);
    if (!cmp.equal) {
      if (mismatches++ == 0) out.detail = "first mismatch: " + cmp.first_mismatch;
      out.pass = false;
    }
  }
  std::ostringstream os;
  os << cases << " cases, " << mismatches << " mismatches";
  out.detail = out.detail.empty() ? os.str() : os.str() + "; " + out.detail;
  return out;
}

SuiteOutcome lemma21_roundtrip_suite(const RoundTripPlan& plan, uint64_t seed) {
  SuiteOutcome out;
  out.name = "transfer-roundtrip";
  uint64_t state = seed ^ 0x21;
  uint64_t forward = 0, backward = 0, failures = 0;
  std::string first_failure;
  auto note = [&](const std::string& what) {
    ++failures;
    if (first_failure.empty()) first_failure = what;
  };
  for (int c = 0; c < plan.cases; ++c) {
    const int n = 1 + c % plan.max_n;
    const RationalVector y = random_rational_point(n, 97, state);
    const Rational a = 1, b = Rational(1, n);
    const Rational v = Rational(n) + Rational(1, 4);
    const Rational gamma = lemma21_gamma(a, b, v);
    const long Q = plan.Q_by_n[std::min<size_t>(n, plan.Q_by_n.size()) - 1];
    RationalMatrix A{y};
    for (const auto& w : best_approx(A, Q)) {
      if (!le_power(w.quality, w.size, v)) continue;
      ++forward;
      // the lattice vector g_t u_y (p, q) is (e^t (yq + p), e^{-t/n} q)
      Rational x = Rational(w.p[0]);
      for (int i = 0; i < n; ++i) x += y[i] * Rational(w.q[i]);
      Lemma21Result r = lemma21_forward(a, b, v, x, w.size);
      if (!r.certified || r.gamma != gamma) note("forward failed at q=" + to_string(w.size));
    }
    // converse: grid-found certificates give ||q||^{-v'} witnesses, v' = (a + γ)/(b − γ)
    const Rational v_back = lemma21_exponent(a, b, gamma);
    if (v_back != v) note("exponent inverse mismatch");
    for (const auto& cert : grid_certificates(y, gamma, Rational(2), plan.k_max, v_back)) {
      ++backward;
      if (!cert.maps_back) note("certificate at k=" + std::to_string(cert.k) + " does not map back");
    }
  }
  out.checks = forward + backward;
  out.pass = failures == 0 && forward > 0 && backward > 0;
  std::ostringstream os;
  os << plan.cases << " points, " << forward << " forward certificates, " << backward << " grid certificates, "
     << failures << " failures";
  if (!first_failure.empty()) os << "; " << first_failure;
  out.detail = os.str();
  return out;
}

SelftestReport run_selftest(const SelftestOptions& options) {
  SelftestReport report;
  LemmaSuitePlan p45, p46;
  RoundTripPlan rt;
  int oracle_cases = 300;
  if (options.reduced) {
    p45 = {{2, 3}, 2, 2};
    p46 = {{2, 3}, 2, 2};
    rt.cases = 12;
    rt.Q_by_n = {60, 30, 12};
    rt.k_max = 4;
    oracle_cases = 100;
  } else {
    p45 = {{2, 3, 4}, 3, 3};
    p46 = {{2, 3, 4}, 2, 3};
  }
  report.suites.push_back(lemma45_suite(p45, options.seed, options.workers));
  report.suites.push_back(lemma46_suite(p46, options.seed, options.workers));
  report.suites.push_back(flow_oracle_suite(oracle_cases, 4, 3, options.seed, options.mutate_shuffle_sign));
  report.suites.push_back(lemma21_roundtrip_suite(rt, options.seed));
  return report;
}

}  // namespace extremal
