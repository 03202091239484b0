// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "extremal/diophantine.hpp"
#include "extremal/extremality_criteria.hpp"
#include "extremal/good_functions.hpp"
#include "extremal/measure48.hpp"
#include "extremal/selftest.hpp"

using namespace extremal;

namespace {

// Pinned tolerances and sizes.
constexpr uint64_t kSeed = 20240611;
constexpr int kLemma45Matrices = 100;
constexpr int kLemma45Bound = 5;
constexpr int kLemma46Matrices = 5;
constexpr int kLemma46Bound = 4;
constexpr double kLemmaSeconds = 300;
constexpr int kOracleCases = 1000;
constexpr int kOracleBasisBound = 3;
constexpr int kRoundTripCases = 200;
constexpr long kRoundTripQ = 200;
constexpr double kGoldenLo = 0.9, kGoldenHi = 1.1;
constexpr double kLiouvilleFloor = 4;
constexpr double kExponentSeconds = 60;
constexpr double kMeasureSlopeMax = -0.35;
constexpr uint64_t kMeasureSamples = 100000;
constexpr double kMeasureSeconds = 600;
constexpr long kSeparationQ = 1000;
constexpr double kMonomialTol = 1e-6;
constexpr double kCantorGrowth = 10;
constexpr int kDirichletRuns = 500;
constexpr long kDirichletQ = 50;
constexpr long kDirichletMinDen = 51;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Outcome ac1_lemma45() {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteOutcome s = lemma45_suite({{2, 3, 4}, kLemma45Bound, kLemma45Matrices}, kSeed, 1);
  const double dt = seconds_since(t0);
  return {s.pass && dt < kLemmaSeconds, "checks=" + std::to_string(s.checks) + " " + fmt(dt) + "s; " + s.detail};
}

Outcome ac2_lemma46() {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteOutcome s = lemma46_suite({{2, 3, 4}, kLemma46Bound, kLemma46Matrices}, kSeed, 1);
  const double dt = seconds_since(t0);
  return {s.pass && dt < kLemmaSeconds, "checks=" + std::to_string(s.checks) + " " + fmt(dt) + "s; " + s.detail};
}

Outcome ac3_oracle() {
  SuiteOutcome s = flow_oracle_suite(kOracleCases, 4, kOracleBasisBound, kSeed, false);
  return {s.pass && s.checks >= static_cast<uint64_t>(kOracleCases), s.detail};
}

Outcome ac4_roundtrip() {
  RoundTripPlan plan;
  plan.cases = kRoundTripCases;
  plan.max_n = 3;
  plan.Q_by_n = {kRoundTripQ, kRoundTripQ, kRoundTripQ};
  SuiteOutcome s = lemma21_roundtrip_suite(plan, kSeed);
  return {s.pass, s.detail};
}

Outcome ac5_exponents() {
  std::string detail;
  bool ok = true;
  auto t0 = std::chrono::steady_clock::now();
  const TestNumber g = golden_number(40);
  check_truncation(g, 10000, 3);
  const ExponentEstimate eg = exponent_estimate({{g.value}}, {10000}, ApproxMode::kStandard);
  double dt = seconds_since(t0);
  ok = ok && eg.omega_hat >= kGoldenLo && eg.omega_hat <= kGoldenHi && dt < kExponentSeconds;
  detail += "golden omega_hat=" + fmt(eg.omega_hat) + " (" + fmt(dt) + "s)";

  t0 = std::chrono::steady_clock::now();
  const TestNumber L = liouville_number(10, 5);
  const ExponentEstimate el =
      exponent_estimate({{L.value}}, {10000}, ApproxMode::kStandard, liouville_convergents(10, 5, 1));
  dt = seconds_since(t0);
  bool injected = false;
  for (const auto& w : el.witness_trail) injected = injected || w.injected;
  ok = ok && el.omega_hat >= kLiouvilleFloor && injected && dt < kExponentSeconds;
  detail += "; liouville omega_hat=" + fmt(el.omega_hat) + " (" + fmt(dt) + "s)";

  t0 = std::chrono::steady_clock::now();
  int zeros = 0;
  const std::vector<RationalMatrix> rationals = {{{Rational(3, 7)}},
                                                 {{Rational(5, 12), Rational(-2, 9)}},
                                                 {{Rational(1, 3)}, {Rational(4, 11)}}};
  for (const auto& A : rationals) {
    auto w = best_approx(A, 200);
    const ExponentEstimate e = exponent_estimate(A, {200}, ApproxMode::kStandard);
    if (!w.empty() && w.back().quality == 0 && std::isinf(e.omega_hat)) ++zeros;
  }
  dt = seconds_since(t0);
  ok = ok && zeros == static_cast<int>(rationals.size()) && dt < kExponentSeconds;
  detail += "; rational quality-0 " + std::to_string(zeros) + "/" + std::to_string(rationals.size());
  return {ok, detail};
}

Outcome ac6_measure() {
  const auto t0 = std::chrono::steady_clock::now();
  const TestNumber b = sqrt2_number(40);
  check_truncation(b, 2048, 3);
  MeasureSweep sw = measure_sweep({b.value}, 3, {16, 64, 256, 1024}, kMeasureSamples, kSeed, 1);
  const double dt = seconds_since(t0);
  std::string detail = "slope=" + fmt(sw.slope) + " predicted=" + fmt(sw.predicted_exponent);
  for (const auto& e : sw.estimates) {
    detail += "; Q=" + std::to_string(e.Q) + " hits=" + std::to_string(e.hits) + " ci=[" +
              fmt(e.measure_hat - e.halfwidth) + "," + fmt(e.measure_hat + e.halfwidth) + "]";
  }
  detail += "; " + fmt(dt) + "s";
  return {sw.slope_defined && sw.slope <= kMeasureSlopeMax && dt < kMeasureSeconds, detail};
}

Outcome ac7_separations() {
  const TestNumber L = liouville_number(10, 5);
  const auto qs = liouville_convergents(10, 5, 1);
  // (i) hyperplane x_0 = L + 0 x_1, n = 2
  const RationalVector a2{L.value, 0};
  CriterionReport hyper = hyperplane_extremal_evidence(a2, kSeparationQ, Rational(5, 2), qs);
  bool exact_witness = false;
  for (const auto& v : hyper.violations) {
    // w_coeffs = (p, q); re-verify ||p + a q|| <= |q|^{-v} exactly
    const Rational q = abs(v.w_coeffs.back());
    exact_witness = exact_witness || (v.note.rfind("injected", 0) == 0 && le_power(v.lhs, q, Rational(5, 2)));
  }
  const bool part1 = hyper.verdict == Verdict::kViolated && exact_witness;

  // (ii) a = (L, 0, 0), n = 3: k = 0, strong threshold 1, extremal threshold 3
  const RationalVector a3{L.value, 0, 0};
  const Rational v = Rational(7, 2);
  StrongVerdict sv = strong_hyperplane_verdict(a3, kSeparationQ, qs);
  CriterionReport standard = hyperplane_extremal_evidence(a3, kSeparationQ, v);
  CriterionReport mult = check_5_6_iii(a3, kSeparationQ, v, 1);
  const bool part2 = sv.k == 0 && sv.threshold == 1 && !sv.strongly_extremal_evidence &&
                     standard.verdict == Verdict::kHoldsAtScale && mult.verdict == Verdict::kViolated;
  std::string detail = "(i) violations=" + std::to_string(hyper.violation_count) +
                       " exact_injected=" + (exact_witness ? "yes" : "no") + "; (ii) k=" + std::to_string(sv.k) +
                       " omega_hat=" + fmt(sv.omega_hat) + " standard_witnesses=" +
                       std::to_string(standard.violation_count) + " multiplicative_violations=" +
                       std::to_string(mult.violation_count);
  return {part1 && part2, detail};
}

Outcome ac8_goodness() {
  std::string detail;
  bool ok = true;
  for (int l = 1; l <= 5; ++l) {
    auto f = FunctionSpec::polynomial(Polynomial::monomial(l));
    GoodnessProfile p = goodness_profile(f, {Ball::interval(-1, 1)}, Rational(1, l), log_eps_grid(10));
    const double c = p.C_hat();
    ok = ok && std::fabs(c - 1) <= kMonomialTol;
    detail += "x^" + std::to_string(l) + " C_hat=" + fmt(c) + "; ";
  }
  auto psi = FunctionSpec::cantor_bad(4);
  Rational x0;
  bool found = false;
  for (const auto& r : psi.cantor().removed) {
    if (r.stage == 2) {
      x0 = r.a;
      found = true;
      break;
    }
  }
  NotGoodTable t = demonstrate_not_good(psi, x0, {1}, Rational(1, 256), 4, log_eps_grid(24), 1);
  const double growth = std::exp(t.log_growth.at(0).second.convert_to<double>());
  ok = ok && found && growth >= kCantorGrowth;
  detail += "cantor(4) stage-2 endpoint growth=" + fmt(growth) + "x";
  return {ok, detail};
}

Outcome ac9_dirichlet() {
  uint64_t state = kSeed;
  int ok = 0;
  for (int run = 0; run < kDirichletRuns; ++run) {
    RationalVector y;
    while (y.size() < 2) {
      const long den = static_cast<long>(kDirichletMinDen + splitmix64(state) % 5000);
      const Rational x(static_cast<long>(splitmix64(state) % den), den);
      if (denominator(x) >= kDirichletMinDen) y.push_back(x);
    }
    bool found = false;
    for (const auto& w : best_approx({y}, kDirichletQ)) {
      found = found || w.quality * w.size * w.size <= 2;
    }
    ok += found;
  }
  return {ok == kDirichletRuns, std::to_string(ok) + "/" + std::to_string(kDirichletRuns) + " runs with a witness"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"AC1 rank-n exhaustive suite", ac1_lemma45},
      {"AC2 column-matrix exhaustive suite", ac2_lemma46},
      {"AC3 flow/oracle equivalence", ac3_oracle},
      {"AC4 approximation/flow round trip", ac4_roundtrip},
      {"AC5 exponent oracles", ac5_exponents},
      {"AC6 Monte-Carlo measure slope", ac6_measure},
      {"AC7 extremal/strong/multiplicative separations", ac7_separations},
      {"AC8 goodness laws", ac8_goodness},
      {"AC9 Dirichlet floor", ac9_dirichlet},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s [%ss] %s\n", o.pass ? "PASS" : "FAIL", c.name, fmt(seconds_since(t0)).c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
