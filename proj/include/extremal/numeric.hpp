#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace extremal {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using ExactScalar = Rational;
// Dynamic-precision MPFR real; the default precision is set through
// set_real_precision_bits and never drops below 128 bits of mantissa.
using HighReal = boost::multiprecision::mpfr_float;

using IntVector = std::vector<BigInt>;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

enum class ErrorCode {
  kInvalidArgument = 1,
  kDimensionMismatch,
  kDependent,
  kCertification,
  kPrecision,
  kUnresolved,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);
inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

// Accepts "7", "-3/7", "0.125", "1e-3", "-2.5e4".
Rational parse_rational(std::string_view text);
// "num/den", or "num" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

BigInt floor_of(const Rational& q);
BigInt ceil_of(const Rational& q);
// Nearest integer, ties to even. `tie` (optional) reports whether a tie occurred.
BigInt round_half_even(const Rational& q, bool* tie = nullptr);

Rational pow_int(const Rational& base, long exponent);
BigInt isqrt(const BigInt& n);
BigInt lcm_of(const BigInt& a, const BigInt& b);
BigInt gcd_of(const BigInt& a, const BigInt& b);

void set_real_precision_bits(unsigned bits);
unsigned real_precision_bits();
HighReal to_real(const Rational& q);
double to_double(const Rational& q);
// Natural log of a positive rational, safe for magnitudes far outside double range.
double log_abs(const Rational& q);
HighReal log_real(const Rational& q);
Rational to_rational(const HighReal& x);

// max(|x|, 1)
Rational abs_plus(const Rational& x);
Rational sup_norm(const RationalVector& v);
BigInt sup_norm(const IntVector& v);

// x ≤ z^{-v} for x ≥ 0, z ≥ 1, v rational — exact.
bool le_power(const Rational& x, const Rational& z, const Rational& v);
// sign of (x - z^{-v}); exact.
int compare_with_power(const Rational& x, const Rational& z, const Rational& v);

}  // namespace extremal
