#include "extremal/log_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace extremal {

namespace {

// Integer exponent D*e for the common denominator D.
long scaled_exponent(const Rational& e, const BigInt& D) {
  Rational s = e * Rational(D);
  require(denominator(s) == 1, ErrorCode::kInternal, "common denominator mismatch");
  BigInt n = numerator(s);
  require(abs(n) < BigInt(1) << 40, ErrorCode::kPrecision, "power product exponent overflow");
  return n.convert_to<long>();
}

bool exact_root(const BigInt& value, unsigned long k, BigInt* root) {
  BigInt r;
  int exact = mpz_root(r.backend().data(), value.backend().data(), k);
  if (!exact) return false;
  *root = r;
  return true;
}

// Small-denominator rational approximation of x via continued fractions.
std::vector<Rational> convergents(double x, int max_terms) {
  std::vector<Rational> out;
  BigInt h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int i = 0; i < max_terms && std::isfinite(x); ++i) {
    double a = std::floor(x);
    BigInt ai(static_cast<long long>(a));
    BigInt h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    out.emplace_back(h2, k2);
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    double frac = x - a;
    if (frac < 1e-12) break;
    x = 1.0 / frac;
  }
  return out;
}

}  // namespace

PowerProduct PowerProduct::power(const Rational& base, const Rational& exponent) {
  require(base > 0, ErrorCode::kInvalidArgument, "power product base must be positive");
  PowerProduct p;
  p.factors_.emplace_back(base, exponent);
  p.normalize();
  return p;
}

void PowerProduct::normalize() {
  std::sort(factors_.begin(), factors_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<Rational, Rational>> merged;
  for (auto& f : factors_) {
    if (!merged.empty() && merged.back().first == f.first) {
      merged.back().second += f.second;
    } else {
      merged.push_back(f);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const auto& f) { return f.first == 1 || f.second == 0; }),
               merged.end());
  factors_ = std::move(merged);
}

PowerProduct PowerProduct::operator*(const PowerProduct& other) const {
  PowerProduct p = *this;
  p.factors_.insert(p.factors_.end(), other.factors_.begin(), other.factors_.end());
  p.normalize();
  return p;
}

PowerProduct PowerProduct::operator/(const PowerProduct& other) const { return *this * other.inverse(); }

PowerProduct PowerProduct::pow(const Rational& exponent) const {
  PowerProduct p = *this;
  for (auto& f : p.factors_) f.second *= exponent;
  p.normalize();
  return p;
}

int PowerProduct::compare(const PowerProduct& other) const {
  PowerProduct ratio = *this / other;
  if (ratio.factors_.empty()) return 0;
  BigInt D = 1;
  for (const auto& f : ratio.factors_) D = lcm_of(D, denominator(f.second));
  double bits = 0;
  for (const auto& f : ratio.factors_) {
    bits += std::abs(to_double(f.second * Rational(D))) *
            (msb(numerator(f.first)) + msb(denominator(f.first)) + 2.0);
  }
  require(bits < 2e8, ErrorCode::kPrecision, "power product comparison too large for exact evaluation");
  Rational value = 1;
  for (const auto& f : ratio.factors_) value *= pow_int(f.first, scaled_exponent(f.second, D));
  if (value < 1) return -1;
  if (value > 1) return 1;
  return 0;
}

bool PowerProduct::is_rational(Rational* value) const {
  BigInt D = 1;
  for (const auto& f : factors_) D = lcm_of(D, denominator(f.second));
  Rational v = 1;
  for (const auto& f : factors_) v *= pow_int(f.first, scaled_exponent(f.second, D));
  if (D == 1) {
    if (value) *value = v;
    return true;
  }
  BigInt rn, rd;
  unsigned long k = D.convert_to<unsigned long>();
  if (!exact_root(numerator(v), k, &rn) || !exact_root(denominator(v), k, &rd)) return false;
  if (value) *value = Rational(rn, rd);
  return true;
}

bool PowerProduct::log_in_base(const Rational& base, Rational* exponent) const {
  require(base > 0 && base != 1, ErrorCode::kInvalidArgument, "log base must be positive and != 1");
  Rational total = 0;
  double lb = log_abs(base);
  for (const auto& f : factors_) {
    double guess = log_abs(f.first) / lb;
    bool found = false;
    for (const Rational& r : convergents(guess, 12)) {
      if (denominator(r) > 4096) break;
      // f.first == base^r  <=>  f.first^{den} == base^{num}
      long num = numerator(r).convert_to<long>(), den = denominator(r).convert_to<long>();
      if (pow_int(f.first, den) == pow_int(base, num)) {
        total += r * f.second;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  if (exponent) *exponent = total;
  return true;
}

HighReal PowerProduct::to_real() const {
  HighReal v = 1;
  for (const auto& f : factors_) v *= boost::multiprecision::pow(extremal::to_real(f.first), extremal::to_real(f.second));
  return v;
}

double PowerProduct::log() const {
  double s = 0;
  for (const auto& f : factors_) s += log_abs(f.first) * to_double(f.second);
  return s;
}

std::string PowerProduct::to_string() const {
  if (factors_.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " * ";
    os << "(" << extremal::to_string(factors_[i].first) << ")^(" << extremal::to_string(factors_[i].second) << ")";
  }
  return os.str();
}

int Magnitude::compare(const Magnitude& other) const {
  require(coefficient >= 0 && other.coefficient >= 0, ErrorCode::kInternal, "negative magnitude");
  if (coefficient == 0 || other.coefficient == 0) {
    if (coefficient == other.coefficient) return 0;
    return coefficient == 0 ? -1 : 1;
  }
  PowerProduct lhs = factor * PowerProduct::of(coefficient);
  PowerProduct rhs = other.factor * PowerProduct::of(other.coefficient);
  return lhs.compare(rhs);
}

HighReal Magnitude::to_real() const { return extremal::to_real(coefficient) * factor.to_real(); }

std::string Magnitude::to_string() const {
  Rational r;
  if (coefficient == 0) return "0";
  if (factor.is_rational(&r)) return extremal::to_string(coefficient * r);
  if (coefficient == 1) return factor.to_string();
  return extremal::to_string(coefficient) + " * " + factor.to_string();
}

}  // namespace extremal
