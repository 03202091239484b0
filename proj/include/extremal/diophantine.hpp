#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "extremal/log_space.hpp"
#include "extremal/numeric.hpp"

namespace extremal {

enum class ApproxMode { kStandard, kMultiplicative };
const char* to_string(ApproxMode mode);

struct ApproxWitness {
  IntVector q;
  IntVector p;
  Rational quality;  // ||Aq + p||
  Rational size;     // ||q|| or prod |q_i|_+
  ApproxMode mode = ApproxMode::kStandard;
  bool tie = false;       // some p coordinate was a round-half-even tie
  bool injected = false;  // supplied analytically, verified exactly
};

// Exact evaluation with p the coordinate-wise nearest integer to -Aq.
ApproxWitness evaluate_witness(const RationalMatrix& A, const IntVector& q, ApproxMode mode);
// Keeps, in increasing size, the points whose quality beats every smaller-or-equal size.
std::vector<ApproxWitness> pareto_frontier(std::vector<ApproxWitness> points);

// Exhaustive over 1 <= ||q|| <= Q (one representative per ±q); A is m×n.
std::vector<ApproxWitness> best_approx(const RationalMatrix& A, long Q);
// y is a row vector of length n (a 1×n system); size = prod |q_i|_+.
std::vector<ApproxWitness> multiplicative_best(const RationalVector& y, long Q);
// Shared engine: every witness in the box, reduced to the best per size value.
std::vector<ApproxWitness> best_per_size(const RationalMatrix& A, long Q, ApproxMode mode);

struct ExponentEstimate {
  double omega_hat = 0;  // +inf when a quality-0 witness exists
  std::vector<ApproxWitness> witness_trail;
  long cutoff_Q = 0;
  std::vector<std::pair<long, double>> omega_by_Q;
};

// Least-squares slope of log(1/quality) against log(size) over trail points
// with size >= min_size (and quality > 0). Multiplied by `scale`.
double trail_slope(const std::vector<ApproxWitness>& trail, double min_size = 2.0);

ExponentEstimate exponent_estimate(const RationalMatrix& A, const std::vector<long>& Q_schedule, ApproxMode mode,
                                   const std::vector<IntVector>& injected_q = {});

// Test numbers --------------------------------------------------------------

struct TestNumber {
  Rational value;
  Rational error_bound;  // |true value - value| <= error_bound; 0 when exact
  bool exact = true;
  std::string provenance;
};

// golden and sqrt2 are truncated to `digits` decimals; liouville(base, depth)
// is sum_{k<=depth} base^{-k!}; lacunary(base, ratio, depth) is
// sum_{1<=k<=depth} base^{-ratio^k}; random(seed, digits) is a seeded decimal in (0,1).
TestNumber golden_number(long digits);
TestNumber sqrt2_number(long digits);
TestNumber liouville_number(long base, int depth);
TestNumber lacunary_number(long base, long ratio, int depth);
TestNumber rational_number(const Rational& value);
TestNumber random_number(uint64_t seed, long digits);
// Token syntax: "golden", "sqrt2", "liouville:10:5", "lacunary:10:3:4",
// "random:7:30", or a rational literal ("3/7", "0.125").
TestNumber parse_test_number(const std::string& token, long digits = 40);

// Truncation-sufficiency rule eps < 1/2 Q^{-(v_max+1)}; throws kPrecision
// with the minimal sufficient number of decimal digits otherwise.
void check_truncation(const TestNumber& number, long Q, const Rational& v_max);
long minimal_digits(long Q, const Rational& v_max);

// Known witnesses of the Liouville truncation: q = base^{k!}, k <= depth-1.
std::vector<IntVector> liouville_convergents(long base, int depth, int dimension = 1, int coordinate = 0);

// Homogeneous sets and the finite-scale lemmas ------------------------------

struct HomogeneousPoint {
  Rational x;
  RationalVector z;
};

// E = {(yq + p, q)} (standard uses ||q|| as the scalar z, multiplicative the vector q).
class HomogeneousSet {
 public:
  HomogeneousSet(RationalVector y, ApproxMode mode) : y_(std::move(y)), mode_(mode) {}
  bool contains(const HomogeneousPoint& point) const;
  // Points with ||q|| <= Q and |x| <= x_bound.
  std::vector<HomogeneousPoint> enumerate(long Q, const Rational& x_bound) const;
  // kE ⊆ E for k = 2, 3 and discreteness (finite count) on an enumerated prefix.
  bool check_homogeneous(long Q, const Rational& x_bound) const;
  const RationalVector& y() const { return y_; }
  ApproxMode mode() const { return mode_; }

 private:
  RationalVector y_;
  ApproxMode mode_;
};

struct Lemma21Result {
  Rational gamma;
  PowerProduct exp_t;      // e^t
  Magnitude lhs;           // max(e^{at}|x|, e^{-bt}|z|)
  Magnitude rhs;           // e^{-γt}
  bool certified = false;  // lhs <= rhs, exactly
  double margin = 0;       // lhs / rhs
};

// gamma = (bv - a)/(v + 1); t defined by e^{-bt}|z| = e^{-γt}.
Rational lemma21_gamma(const Rational& a, const Rational& b, const Rational& v);
Lemma21Result lemma21_forward(const Rational& a, const Rational& b, const Rational& v, const Rational& x,
                              const Rational& z);
// Inverse of the γ formula: v = (a + γ)/(b - γ).
Rational lemma21_exponent(const Rational& a, const Rational& b, const Rational& gamma);

struct Lemma51Result {
  Rational gamma;
  PowerProduct exp_t;
  std::vector<PowerProduct> exp_t_i;
  bool sum_identity = false;  // prod e^{t_i} == e^t exactly
  bool certified = false;     // per-coordinate bound |z_i| <= e^{-t_i}
  bool degenerate = false;    // prod |z_i|_+ == 1
};

// gamma = (v - n)/(n(v + 1)); e^{(1-nγ)t} = Π_+(z), e^{t_i} = e^{γt}|z_i|_+.
Lemma51Result lemma51_forward(const Rational& v, const Rational& x, const RationalVector& z);

// Approximation <-> short-vector round trip on E = u_y Z^{n+1}.
struct GridCertificate {
  long k = 0;            // t = n k log(base)
  IntVector q;
  BigInt p;
  Rational x;            // yq + p
  Rational z;            // ||q||
  bool maps_back = false;  // |x| <= ||q||^{-v'}, exact
};
// Searches t = n k log(base), k = 1..k_max, for exact certificates δ ≤ e^{-γt}.
std::vector<GridCertificate> grid_certificates(const RationalVector& y, const Rational& gamma, const Rational& base,
                                               long k_max, const Rational& v_back);

}  // namespace extremal
