#pragma once

#include <cstdint>
#include <vector>

#include "extremal/numeric.hpp"

namespace extremal {

// A(b, v, Q) = { x in [0,1) : |p + (b~ q) x| < Q^{-v} for some p in Z,
// q in Z^n with Q <= ||q|| < 2Q }, b~ = (1, b).

// Exact membership for a rational x (certified lattice-box enumeration).
bool in_A_set(const RationalVector& b, const Rational& v, long Q, const Rational& x);
// Reference membership by scanning the whole q-shell; for small Q only.
bool in_A_set_bruteforce(const RationalVector& b, const Rational& v, long Q, const Rational& x);

struct MeasureEstimate {
  long Q = 0;
  uint64_t samples = 0;
  uint64_t hits = 0;
  double measure_hat = 0;
  double halfwidth = 0;  // 1.96 * sqrt(p(1-p)/N)
};

// Samples are 53-bit dyadic x; shard i (of `shard_size` samples) draws from
// mt19937_64(seed + i), so the estimate does not depend on `workers`.
MeasureEstimate measure_A_set(const RationalVector& b, const Rational& v, long Q, uint64_t samples, uint64_t seed,
                              int workers = 1, uint64_t shard_size = 10000);

struct MeasureSweep {
  std::vector<MeasureEstimate> estimates;
  double slope = 0;  // least-squares slope of log(measure_hat) against log(Q)
  double predicted_exponent = 0;  // (n - v)/2
  bool slope_defined = true;      // false when some estimate is 0
};
MeasureSweep measure_sweep(const RationalVector& b, const Rational& v, const std::vector<long>& Qs, uint64_t samples,
                           uint64_t seed, int workers = 1);

}  // namespace extremal
