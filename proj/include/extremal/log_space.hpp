#pragma once

#include <string>
#include <utility>
#include <vector>

#include "extremal/numeric.hpp"

namespace extremal {

// Exact positive real of the form prod_i base_i^{exponent_i} with rational
// bases > 0 and rational exponents. Used to compare exponentials exactly when
// every time parameter is a rational multiple of the log of a rational.
class PowerProduct {
 public:
  PowerProduct() = default;  // the number 1
  static PowerProduct power(const Rational& base, const Rational& exponent);
  static PowerProduct of(const Rational& value) { return power(value, 1); }

  PowerProduct operator*(const PowerProduct& other) const;
  PowerProduct operator/(const PowerProduct& other) const;
  PowerProduct pow(const Rational& exponent) const;
  PowerProduct inverse() const { return pow(-1); }

  // Exact three-way comparison with another power product.
  int compare(const PowerProduct& other) const;
  bool operator==(const PowerProduct& other) const { return compare(other) == 0; }

  // If the value is rational, return it.
  bool is_rational(Rational* value = nullptr) const;
  // Exponent of `base` when the value is a rational power of it (base^e), else false.
  bool log_in_base(const Rational& base, Rational* exponent) const;

  HighReal to_real() const;
  double log() const;
  std::string to_string() const;
  const std::vector<std::pair<Rational, Rational>>& factors() const { return factors_; }

 private:
  void normalize();
  std::vector<std::pair<Rational, Rational>> factors_;
};

// Nonnegative real coefficient * power product; zero is allowed.
struct Magnitude {
  Rational coefficient = 1;
  PowerProduct factor;

  static Magnitude exact(const Rational& value) { return {abs(value), PowerProduct()}; }
  static Magnitude power(const Rational& base, const Rational& exponent) {
    return {1, PowerProduct::power(base, exponent)};
  }
  Magnitude operator*(const Magnitude& o) const { return {coefficient * o.coefficient, factor * o.factor}; }
  int compare(const Magnitude& other) const;
  bool operator<(const Magnitude& o) const { return compare(o) < 0; }
  bool operator<=(const Magnitude& o) const { return compare(o) <= 0; }
  HighReal to_real() const;
  std::string to_string() const;
};

}  // namespace extremal
