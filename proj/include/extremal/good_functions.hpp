#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "extremal/numeric.hpp"

namespace extremal {

// Univariate polynomial with exact rational coefficients, c[0] + c[1] x + ...
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(RationalVector coeffs);
  static Polynomial monomial(int degree, const Rational& coeff = 1);
  static Polynomial constant(const Rational& c) { return Polynomial(RationalVector{c}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const RationalVector& coeffs() const { return c_; }
  Rational operator()(const Rational& x) const;
  // Enclosure of the values on [lo, hi] (interval Horner, exact rationals).
  std::pair<Rational, Rational> range(const Rational& lo, const Rational& hi) const;

  Polynomial derivative() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& s) const;
  // Euclidean division: *this = q * d + r.
  void divmod(const Polynomial& d, Polynomial* q, Polynomial* r) const;
  Polynomial monic() const;
  std::string to_string() const;

 private:
  void trim();
  RationalVector c_;
};

Polynomial gcd(const Polynomial& a, const Polynomial& b);
Polynomial square_free_part(const Polynomial& p);

// Disjoint isolating brackets [lo, hi] (lo == hi for exact rational roots),
// each containing exactly one root of p in (a, b), refined to width <= tol.
std::vector<std::pair<Rational, Rational>> isolate_roots(const Polynomial& p, const Rational& a, const Rational& b,
                                                         const Rational& tol);

// Finite union of disjoint closed intervals with rational endpoints.
struct IntervalSet {
  std::vector<std::pair<Rational, Rational>> parts;
  Rational measure() const;
  IntervalSet intersect(const IntervalSet& other) const;
  void normalize();
};

// Ball B(center, radius) in the sup norm; in one dimension the interval (c - r, c + r).
struct Ball {
  RationalVector center;
  Rational radius;
  static Ball interval(const Rational& lo, const Rational& hi);
  Rational lo(int i = 0) const { return center[i] - radius; }
  Rational hi(int i = 0) const { return center[i] + radius; }
  Rational volume() const;
};

// Smooth function vanishing on a fat Cantor set: psi = sum_{k<=levels} c_k sum_{J in J_k} psi_J,
// psi_J(x) = exp(-1/(x-a)^2 - 1/(b-x)^2) on J = (a, b), c_k = 3^{-3^k}; the
// intervals left at stage k-1 are cut into 3^{k+1} pieces and the middle one is removed.
struct RemovedInterval {
  Rational a;
  Rational b;
  int stage = 1;
};
struct CantorBad {
  int levels = 0;
  std::vector<RemovedInterval> removed;      // sorted by a
  std::vector<std::pair<Rational, Rational>> surviving;  // K_levels
  Rational surviving_measure;                // prod_{k<=levels} (1 - 3^{-(k+1)})
  HighReal log_c(int stage) const;           // log c_k = -3^k log 3
  HighReal log_value(const Rational& x) const;  // -inf (as -HUGE) where psi = 0
  bool vanishes_at(const Rational& x) const;
  bool in_surviving_set(const Rational& x) const;
};
CantorBad build_cantor_bad(int levels);

class FunctionSpec {
 public:
  enum class Kind { kPolynomial, kMultiPolynomial, kCantorBad, kSupOf };

  static FunctionSpec polynomial(Polynomial p);
  // terms: exponent vector -> coefficient
  static FunctionSpec multi_polynomial(int dimension, std::map<std::vector<int>, Rational> terms);
  static FunctionSpec cantor_bad(int levels);
  // sup_i |f_i|
  static FunctionSpec sup_of(std::vector<FunctionSpec> parts);
  // sum_i w_i f_i, for polynomial parts of one dimension (collapsed to a polynomial)
  static FunctionSpec affine_combination(const std::vector<FunctionSpec>& parts, const RationalVector& weights);

  Kind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  const Polynomial& poly() const { return poly_; }
  const std::map<std::vector<int>, Rational>& terms() const { return terms_; }
  const CantorBad& cantor() const { return *cantor_; }
  const std::vector<FunctionSpec>& parts() const { return parts_; }
  // Exact value at a rational point (not for cantor_bad).
  Rational evaluate(const RationalVector& x) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::kPolynomial;
  int dimension_ = 1;
  Polynomial poly_;
  std::map<std::vector<int>, Rational> terms_;
  std::shared_ptr<const CantorBad> cantor_;
  std::vector<FunctionSpec> parts_;
};

// epsilon either as an exact rational or as e^{-L} (L = neg_log, rational).
struct Epsilon {
  std::optional<Rational> value;
  Rational neg_log;
  static Epsilon exact(const Rational& e);
  static Epsilon exp_minus(const Rational& L);
  HighReal log() const;
  std::string label() const;
};

struct SublevelBounds {
  Rational inner;  // certified lower bound of the measure
  Rational outer;  // certified upper bound
  HighReal log_sup_lo;
  HighReal log_sup_hi;
  bool zero_on_ball = false;
  Rational undecided() const { return outer - inner; }
};

// |{x in B : |f(x)| < threshold}| with an absolute rational threshold.
SublevelBounds sublevel_measure(const FunctionSpec& f, const Ball& B, const Rational& threshold);
// |{x in B : |f(x)| < eps * sup_B |f|}|.
SublevelBounds sublevel_relative(const FunctionSpec& f, const Ball& B, const Epsilon& eps);

struct SupBounds {
  HighReal lo;
  HighReal hi;
  HighReal log_lo;
  HighReal log_hi;
};
SupBounds sup_on_ball(const FunctionSpec& f, const Ball& B);

struct GoodnessEntry {
  Ball ball;
  Epsilon eps;
  HighReal log_ratio_lo;  // log of inner / (eps^alpha |B|)
  HighReal log_ratio_hi;  // log of outer / (eps^alpha |B|)
  double ratio_hi() const;
};
struct GoodnessProfile {
  Rational alpha;
  std::vector<GoodnessEntry> entries;
  HighReal log_C_hat;  // sup over entries of log_ratio_hi
  double C_hat() const;
  std::string to_csv() const;  // ball_center,radius,alpha,eps,ratio
};
GoodnessProfile goodness_profile(const FunctionSpec& f, const std::vector<Ball>& balls, const Rational& alpha,
                                 const std::vector<Epsilon>& eps_grid);

// Balls touching x0: side > 0 gives (x0, x0 + 2r), side < 0 gives (x0 - 2r, x0), side == 0 centred.
struct NotGoodRow {
  Rational alpha;
  Rational radius;
  HighReal log_C_hat;
};
struct NotGoodTable {
  std::vector<NotGoodRow> rows;
  // per alpha: C_hat(smallest radius) / C_hat(largest radius), as a log
  std::vector<std::pair<Rational, HighReal>> log_growth;
};
NotGoodTable demonstrate_not_good(const FunctionSpec& f, const Rational& x0, const std::vector<Rational>& alphas,
                                  const Rational& r0, int halvings, const std::vector<Epsilon>& eps_grid, int side = 1);

// eps = e^{-L} for L = 2^i, i = 0..max_power.
std::vector<Epsilon> log_eps_grid(int max_power);

}  // namespace extremal
