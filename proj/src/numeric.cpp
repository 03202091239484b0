#include "extremal/numeric.hpp"

#include <cmath>
#include <cstdlib>

namespace extremal {

namespace {

unsigned& precision_bits_storage() {
  static unsigned bits = [] {
    unsigned b = 166;
    if (const char* env = std::getenv("EXTREMAL_PRECISION_BITS")) {
      long v = std::strtol(env, nullptr, 10);
      if (v >= 128 && v <= 100000) b = static_cast<unsigned>(v);
    }
    HighReal::default_precision(static_cast<unsigned>(std::ceil(b * 0.30103)) + 1);
    return b;
  }();
  return bits;
}

BigInt parse_integer(std::string_view digits) {
  require(!digits.empty(), ErrorCode::kInvalidArgument, "empty integer literal");
  for (char c : digits) {
    require(c >= '0' && c <= '9', ErrorCode::kInvalidArgument,
            "bad digit in number: " + std::string(digits));
  }
  // strip leading zeros: the string constructor reads "0…" as octal
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return BigInt(std::string(digits));
}

}  // namespace

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  require(!text.empty(), ErrorCode::kInvalidArgument, "empty rational literal");
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational result;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    require(den != 0, ErrorCode::kInvalidArgument, "zero denominator");
    result = Rational(num, den);
  } else {
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      std::string exp_text(text.substr(e + 1));
      require(!exp_text.empty(), ErrorCode::kInvalidArgument, "bad exponent");
      char* end = nullptr;
      exponent = std::strtol(exp_text.c_str(), &end, 10);
      require(*end == '\0', ErrorCode::kInvalidArgument, "bad exponent: " + exp_text);
      text = text.substr(0, e);
    }
    std::string digits;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
      exponent -= static_cast<long>(text.size() - dot - 1);
    } else {
      digits = std::string(text);
    }
    if (digits.empty()) digits = "0";
    result = Rational(parse_integer(digits));
    if (exponent > 0) result *= pow_int(Rational(10), exponent);
    if (exponent < 0) result /= pow_int(Rational(10), -exponent);
  }
  return negative ? Rational(-result) : result;
}

std::string to_string(const BigInt& z) { return z.str(); }

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

BigInt floor_of(const Rational& q) {
  BigInt num = numerator(q), den = denominator(q);
  BigInt r;
  mpz_fdiv_q(r.backend().data(), num.backend().data(), den.backend().data());
  return r;
}

BigInt ceil_of(const Rational& q) {
  BigInt num = numerator(q), den = denominator(q);
  BigInt r;
  mpz_cdiv_q(r.backend().data(), num.backend().data(), den.backend().data());
  return r;
}

BigInt round_half_even(const Rational& q, bool* tie) {
  BigInt f = floor_of(q);
  Rational frac = q - Rational(f);
  bool is_tie = frac == Rational(1, 2);
  if (tie) *tie = is_tie;
  if (is_tie) return (f % 2 == 0) ? f : BigInt(f + 1);
  return frac < Rational(1, 2) ? f : BigInt(f + 1);
}

Rational pow_int(const Rational& base, long exponent) {
  if (exponent < 0) {
    require(base != 0, ErrorCode::kInvalidArgument, "zero to a negative power");
    Rational inv = Rational(denominator(base), numerator(base));
    return pow_int(inv, -exponent);
  }
  BigInt num = boost::multiprecision::pow(numerator(base), static_cast<unsigned>(exponent));
  BigInt den = boost::multiprecision::pow(denominator(base), static_cast<unsigned>(exponent));
  return Rational(num, den);
}

BigInt isqrt(const BigInt& n) {
  require(n >= 0, ErrorCode::kInvalidArgument, "isqrt of negative");
  BigInt r;
  mpz_sqrt(r.backend().data(), n.backend().data());
  return r;
}

BigInt gcd_of(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
BigInt lcm_of(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

void set_real_precision_bits(unsigned bits) {
  require(bits >= 128, ErrorCode::kPrecision, "real precision must be at least 128 bits");
  precision_bits_storage() = bits;
  HighReal::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30103)) + 1);
}

unsigned real_precision_bits() { return precision_bits_storage(); }

HighReal to_real(const Rational& q) {
  (void)precision_bits_storage();
  return HighReal(q);
}

double to_double(const Rational& q) { return to_real(q).convert_to<double>(); }

HighReal log_real(const Rational& q) {
  require(q != 0, ErrorCode::kInvalidArgument, "log of zero");
  return log(to_real(abs(q)));
}

double log_abs(const Rational& q) { return log_real(q).convert_to<double>(); }

Rational to_rational(const HighReal& x) { return Rational(x); }

Rational abs_plus(const Rational& x) {
  Rational a = abs(x);
  return a < 1 ? Rational(1) : a;
}

Rational sup_norm(const RationalVector& v) {
  Rational m = 0;
  for (const auto& x : v) m = std::max(m, Rational(abs(x)));
  return m;
}

BigInt sup_norm(const IntVector& v) {
  BigInt m = 0;
  for (const auto& x : v) m = std::max(m, BigInt(abs(x)));
  return m;
}

int compare_with_power(const Rational& x, const Rational& z, const Rational& v) {
  require(x >= 0, ErrorCode::kInvalidArgument, "compare_with_power: negative x");
  require(z > 0, ErrorCode::kInvalidArgument, "compare_with_power: non-positive base");
  if (x == 0) return -1;
  // log-space filter; exact arithmetic only near the boundary
  const double lx = log_abs(x), lz = log_abs(z), vd = v.convert_to<double>();
  const double margin = lx + vd * lz;
  if (std::isfinite(margin) && std::fabs(margin) > 1e-9 * (1 + std::fabs(lx) + std::fabs(vd * lz))) {
    return margin < 0 ? -1 : 1;
  }
  // x ? z^{-a/d}  <=>  x^d ? z^{-a}
  BigInt a = numerator(v), d = denominator(v);
  require(d < BigInt(1) << 20 && abs(a) < BigInt(1) << 24, ErrorCode::kPrecision,
          "exponent too large for exact comparison: " + to_string(v));
  long ai = a.convert_to<long>(), di = d.convert_to<long>();
  Rational lhs = pow_int(x, di) * pow_int(z, ai);
  if (lhs < 1) return -1;
  if (lhs > 1) return 1;
  return 0;
}

bool le_power(const Rational& x, const Rational& z, const Rational& v) {
  return compare_with_power(x, z, v) <= 0;
}

}  // namespace extremal
