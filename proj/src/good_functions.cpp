#include "extremal/good_functions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace extremal {

namespace {

HighReal neg_infinity() { return -std::numeric_limits<HighReal>::infinity(); }

HighReal safe_log(const Rational& q) { return q > 0 ? log_real(q) : neg_infinity(); }

int sign_of(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

Rational pow_rational(const Rational& x, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

// Polynomial -----------------------------------------------------------------

Polynomial::Polynomial(RationalVector coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(int degree, const Rational& coeff) {
  require(degree >= 0, ErrorCode::kInvalidArgument, "monomial: negative degree");
  RationalVector c(degree + 1, Rational(0));
  c[degree] = coeff;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::pair<Rational, Rational> Polynomial::range(const Rational& lo, const Rational& hi) const {
  if (c_.empty()) return {0, 0};
  Rational a = c_.back(), b = c_.back();
  for (int i = degree() - 1; i >= 0; --i) {
    Rational p[4] = {a * lo, a * hi, b * lo, b * hi};
    a = *std::min_element(p, p + 4) + c_[i];
    b = *std::max_element(p, p + 4) + c_[i];
  }
  return {a, b};
}

Polynomial Polynomial::derivative() const {
  RationalVector d;
  for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  RationalVector r(std::max(c_.size(), o.c_.size()), Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o.scaled(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial();
  RationalVector r(c_.size() + o.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  return Polynomial(std::move(r));
}

Polynomial Polynomial::scaled(const Rational& s) const {
  RationalVector r = c_;
  for (auto& x : r) x *= s;
  return Polynomial(std::move(r));
}

void Polynomial::divmod(const Polynomial& d, Polynomial* q, Polynomial* r) const {
  require(!d.is_zero(), ErrorCode::kInvalidArgument, "polynomial division by zero");
  RationalVector rem = c_;
  RationalVector quo(std::max(0, degree() - d.degree() + 1), Rational(0));
  const Rational lead = d.c_.back();
  for (int i = degree(); i >= d.degree(); --i) {
    if (rem[i] == 0) continue;
    Rational f = rem[i] / lead;
    quo[i - d.degree()] = f;
    for (int j = 0; j <= d.degree(); ++j) rem[i - d.degree() + j] -= f * d.c_[j];
  }
  if (q) *q = Polynomial(std::move(quo));
  if (r) *r = Polynomial(std::move(rem));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  return scaled(1 / c_.back());
}

std::string Polynomial::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i] == 0) continue;
    if (!s.empty()) s += " + ";
    s += extremal::to_string(c_[i]);
    if (i >= 1) s += "*x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  Polynomial x = a, y = b;
  while (!y.is_zero()) {
    Polynomial r;
    x.divmod(y, nullptr, &r);
    x = y;
    y = r;
  }
  return x.monic();
}

Polynomial square_free_part(const Polynomial& p) {
  if (p.degree() <= 0) return p;
  Polynomial g = gcd(p, p.derivative());
  Polynomial q;
  p.divmod(g, &q, nullptr);
  return q;
}

namespace {

class Sturm {
 public:
  explicit Sturm(const Polynomial& p) {
    seq_.push_back(p);
    seq_.push_back(p.derivative());
    while (!seq_.back().is_zero()) {
      Polynomial r;
      seq_[seq_.size() - 2].divmod(seq_.back(), nullptr, &r);
      seq_.push_back(r.scaled(-1));
    }
    seq_.pop_back();
  }
  int variations(const Rational& x) const {
    int count = 0, last = 0;
    for (const auto& s : seq_) {
      int sg = sign_of(s(x));
      if (sg == 0) continue;
      if (last != 0 && sg != last) ++count;
      last = sg;
    }
    return count;
  }
  // roots in (a, b]
  int count(const Rational& a, const Rational& b) const { return variations(a) - variations(b); }

 private:
  std::vector<Polynomial> seq_;
};

}  // namespace

std::vector<std::pair<Rational, Rational>> isolate_roots(const Polynomial& p, const Rational& a, const Rational& b,
                                                         const Rational& tol) {
  require(a < b, ErrorCode::kInvalidArgument, "isolate_roots: empty interval");
  require(tol > 0, ErrorCode::kInvalidArgument, "isolate_roots: tolerance must be positive");
  require(!p.is_zero(), ErrorCode::kInvalidArgument, "isolate_roots: zero polynomial");
  std::vector<std::pair<Rational, Rational>> out;
  const Polynomial q = square_free_part(p);
  if (q.degree() <= 0) return out;
  const Sturm sturm(q);

  // one root in (l, r]; shrink to a bracket with l a non-root strictly inside (a, b)
  auto refine = [&](Rational l, Rational r) {
    if (q(r) == 0) {
      if (r < b) out.emplace_back(r, r);
      return;
    }
    while (r - l > tol || q(l) == 0 || l == a) {
      Rational m = (l + r) / 2;
      if (q(m) == 0) {
        out.emplace_back(m, m);
        return;
      }
      if (sturm.count(m, r) == 1) {
        l = m;
      } else {
        r = m;
      }
    }
    out.emplace_back(l, r);
  };
  std::function<void(const Rational&, const Rational&, int)> isolate = [&](const Rational& l, const Rational& r,
                                                                          int cnt) {
    if (cnt == 0) return;
    if (cnt == 1) {
      refine(l, r);
      return;
    }
    Rational m = (l + r) / 2;
    int left = sturm.count(l, m);
    isolate(l, m, left);
    isolate(m, r, cnt - left);
  };
  isolate(a, b, sturm.count(a, b));
  std::sort(out.begin(), out.end());
  return out;
}

// IntervalSet ------------------------------------------------------------------

Rational IntervalSet::measure() const {
  Rational m = 0;
  for (const auto& [l, r] : parts) m += r - l;
  return m;
}

void IntervalSet::normalize() {
  std::vector<std::pair<Rational, Rational>> sorted;
  for (const auto& p : parts) {
    if (p.second > p.first) sorted.push_back(p);
  }
  std::sort(sorted.begin(), sorted.end());
  parts.clear();
  for (auto& p : sorted) {
    if (!parts.empty() && p.first <= parts.back().second) {
      parts.back().second = std::max(parts.back().second, p.second);
    } else {
      parts.push_back(std::move(p));
    }
  }
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  IntervalSet out;
  for (const auto& [a, b] : parts) {
    for (const auto& [c, d] : other.parts) {
      Rational l = std::max(a, c), r = std::min(b, d);
      if (r > l) out.parts.emplace_back(l, r);
    }
  }
  out.normalize();
  return out;
}

Ball Ball::interval(const Rational& lo, const Rational& hi) {
  require(hi > lo, ErrorCode::kInvalidArgument, "ball: empty interval");
  return Ball{{(lo + hi) / 2}, (hi - lo) / 2};
}

Rational Ball::volume() const {
  Rational v = 1;
  for (size_t i = 0; i < center.size(); ++i) v *= 2 * radius;
  return v;
}

// Cantor construction ------------------------------------------------------------

HighReal CantorBad::log_c(int stage) const {
  HighReal three_k = pow(HighReal(3), stage);
  return -three_k * log(HighReal(3));
}

bool CantorBad::vanishes_at(const Rational& x) const {
  for (const auto& J : removed) {
    if (x > J.a && x < J.b) return false;
  }
  return true;
}

bool CantorBad::in_surviving_set(const Rational& x) const {
  for (const auto& [l, r] : surviving) {
    if (x >= l && x <= r) return true;
  }
  return false;
}

HighReal CantorBad::log_value(const Rational& x) const {
  for (const auto& J : removed) {
    if (x > J.a && x < J.b) {
      HighReal u = to_real(x - J.a), w = to_real(J.b - x);
      return log_c(J.stage) - 1 / (u * u) - 1 / (w * w);
    }
  }
  return neg_infinity();
}

CantorBad build_cantor_bad(int levels) {
  require(levels >= 1 && levels <= 6, ErrorCode::kInvalidArgument, "cantor_bad: levels must be in [1, 6]");
  CantorBad c;
  c.levels = levels;
  std::vector<std::pair<Rational, Rational>> alive{{Rational(0), Rational(1)}};
  for (int k = 1; k <= levels; ++k) {
    const long pieces = static_cast<long>(std::pow(3, k + 1));
    const long mid = (pieces - 1) / 2;
    std::vector<std::pair<Rational, Rational>> next;
    for (const auto& [s, e] : alive) {
      Rational piece = (e - s) / pieces;
      Rational a = s + piece * mid, b = s + piece * (mid + 1);
      c.removed.push_back({a, b, k});
      next.emplace_back(s, a);
      next.emplace_back(b, e);
    }
    alive = std::move(next);
  }
  std::sort(c.removed.begin(), c.removed.end(), [](const RemovedInterval& x, const RemovedInterval& y) { return x.a < y.a; });
  c.surviving = alive;
  c.surviving_measure = 1;
  for (int k = 1; k <= levels; ++k) c.surviving_measure *= 1 - Rational(1, static_cast<long>(std::pow(3, k + 1)));
  return c;
}

// FunctionSpec ---------------------------------------------------------------------

FunctionSpec FunctionSpec::polynomial(Polynomial p) {
  FunctionSpec f;
  f.kind_ = Kind::kPolynomial;
  f.dimension_ = 1;
  f.poly_ = std::move(p);
  return f;
}

FunctionSpec FunctionSpec::multi_polynomial(int dimension, std::map<std::vector<int>, Rational> terms) {
  require(dimension >= 1 && dimension <= 4, ErrorCode::kInvalidArgument, "multi_polynomial: dimension in [1, 4]");
  for (const auto& [e, c] : terms) {
    require(static_cast<int>(e.size()) == dimension, ErrorCode::kDimensionMismatch, "multi_polynomial: exponent length");
    for (int x : e) require(x >= 0, ErrorCode::kInvalidArgument, "multi_polynomial: negative exponent");
  }
  if (dimension == 1) {
    RationalVector c;
    for (const auto& [e, coeff] : terms) {
      if (static_cast<int>(c.size()) <= e[0]) c.resize(e[0] + 1, Rational(0));
      c[e[0]] += coeff;
    }
    return polynomial(Polynomial(std::move(c)));
  }
  FunctionSpec f;
  f.kind_ = Kind::kMultiPolynomial;
  f.dimension_ = dimension;
  for (auto& [e, c] : terms) {
    if (c != 0) f.terms_[e] = c;
  }
  return f;
}

FunctionSpec FunctionSpec::cantor_bad(int levels) {
  FunctionSpec f;
  f.kind_ = Kind::kCantorBad;
  f.dimension_ = 1;
  f.cantor_ = std::make_shared<const CantorBad>(build_cantor_bad(levels));
  return f;
}

FunctionSpec FunctionSpec::sup_of(std::vector<FunctionSpec> parts) {
  require(!parts.empty(), ErrorCode::kInvalidArgument, "sup_of: no parts");
  for (const auto& p : parts) {
    require(p.dimension() == parts[0].dimension(), ErrorCode::kDimensionMismatch, "sup_of: mixed dimensions");
    require(p.kind() != Kind::kCantorBad, ErrorCode::kInvalidArgument, "sup_of: cantor_bad parts are not supported");
  }
  FunctionSpec f;
  f.kind_ = Kind::kSupOf;
  f.dimension_ = parts[0].dimension();
  f.parts_ = std::move(parts);
  return f;
}

FunctionSpec FunctionSpec::affine_combination(const std::vector<FunctionSpec>& parts, const RationalVector& weights) {
  require(!parts.empty() && parts.size() == weights.size(), ErrorCode::kDimensionMismatch,
          "affine_combination: parts and weights must match");
  const int d = parts[0].dimension();
  std::map<std::vector<int>, Rational> terms;
  for (size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    require(p.dimension() == d, ErrorCode::kDimensionMismatch, "affine_combination: mixed dimensions");
    if (p.kind() == Kind::kPolynomial) {
      for (int e = 0; e <= p.poly().degree(); ++e) {
        std::vector<int> key(d, 0);
        key[0] = e;
        terms[key] += weights[i] * p.poly().coeffs()[e];
      }
    } else if (p.kind() == Kind::kMultiPolynomial) {
      for (const auto& [e, c] : p.terms()) terms[e] += weights[i] * c;
    } else {
      fail(ErrorCode::kInvalidArgument, "affine_combination: only polynomial parts are supported");
    }
  }
  return multi_polynomial(d, std::move(terms));
}

Rational FunctionSpec::evaluate(const RationalVector& x) const {
  require(static_cast<int>(x.size()) == dimension_, ErrorCode::kDimensionMismatch, "evaluate: point dimension");
  switch (kind_) {
    case Kind::kPolynomial:
      return poly_(x[0]);
    case Kind::kMultiPolynomial: {
      Rational s = 0;
      for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < dimension_; ++i) t *= pow_rational(x[i], e[i]);
        s += t;
      }
      return s;
    }
    case Kind::kSupOf: {
      Rational m = 0;
      for (const auto& p : parts_) m = std::max(m, Rational(abs(p.evaluate(x))));
      return m;
    }
    case Kind::kCantorBad:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "evaluate: cantor_bad has no exact rational values");
}

std::string FunctionSpec::describe() const {
  switch (kind_) {
    case Kind::kPolynomial:
      return "polynomial(" + poly_.to_string() + ")";
    case Kind::kMultiPolynomial: {
      std::ostringstream os;
      os << "multi_polynomial(d=" << dimension_ << ", terms=" << terms_.size() << ")";
      return os.str();
    }
    case Kind::kCantorBad:
      return "cantor_bad(levels=" + std::to_string(cantor_->levels) + ")";
    case Kind::kSupOf: {
      std::string s = "sup_of(";
      for (size_t i = 0; i < parts_.size(); ++i) s += (i ? ", " : "") + parts_[i].describe();
      return s + ")";
    }
  }
  return "?";
}

// Epsilon ---------------------------------------------------------------------------

Epsilon Epsilon::exact(const Rational& e) {
  require(e > 0, ErrorCode::kInvalidArgument, "epsilon must be positive");
  Epsilon x;
  x.value = e;
  return x;
}

Epsilon Epsilon::exp_minus(const Rational& L) {
  require(L >= 0, ErrorCode::kInvalidArgument, "epsilon = e^{-L} needs L >= 0");
  Epsilon x;
  x.neg_log = L;
  return x;
}

HighReal Epsilon::log() const { return value ? log_real(*value) : HighReal(-to_real(neg_log)); }

std::string Epsilon::label() const { return value ? to_string(*value) : "exp(-" + to_string(neg_log) + ")"; }

std::vector<Epsilon> log_eps_grid(int max_power) {
  require(max_power >= 0 && max_power <= 40, ErrorCode::kInvalidArgument, "log_eps_grid: max_power in [0, 40]");
  std::vector<Epsilon> out;
  for (int i = 0; i <= max_power; ++i) out.push_back(Epsilon::exp_minus(pow_int(Rational(2), i)));
  return out;
}

namespace {

constexpr long kPolyLogEpsCap = 4096;

// Rational bracket of epsilon.
std::pair<Rational, Rational> eps_bracket(const Epsilon& eps) {
  if (eps.value) return {*eps.value, *eps.value};
  require(eps.neg_log <= kPolyLogEpsCap, ErrorCode::kInvalidArgument,
          "polynomial sublevel sets need e^{-L} with L <= 4096; pass an exact epsilon instead");
  HighReal e = exp(-to_real(eps.neg_log));
  HighReal rel = pow(HighReal(2), -120);
  return {to_rational(e * (1 - rel)), to_rational(e * (1 + rel))};
}

struct PolySublevel {
  IntervalSet inner;
  IntervalSet outer;
};

// {x in (a, b) : |p(x)| < t} for t > 0, with rational inner/outer approximations.
PolySublevel poly_sublevel(const Polynomial& p, const Rational& a, const Rational& b, const Rational& t) {
  PolySublevel out;
  Polynomial h = p * p - Polynomial::constant(t * t);
  if (h.degree() <= 0) {
    if (h.is_zero() || h.coeffs()[0] >= 0) return out;
    out.inner.parts.emplace_back(a, b);
    out.outer.parts.emplace_back(a, b);
    return out;
  }
  // brackets narrower than 2^-60 of the neighbouring gaps (relative, so tiny sublevel sets stay accurate)
  Rational tol = (b - a) / pow_int(Rational(2), 64);
  std::vector<std::pair<Rational, Rational>> roots;
  for (int pass = 0; pass < 64; ++pass) {
    roots = isolate_roots(h, a, b, tol);
    Rational gap = b - a, width = 0;
    bool touching = false;
    for (size_t i = 0; i <= roots.size(); ++i) {
      Rational l = i == 0 ? a : roots[i - 1].second;
      Rational r = i == roots.size() ? b : roots[i].first;
      if (r > l) gap = std::min(gap, Rational(r - l));
      if (r <= l && i > 0 && i < roots.size()) touching = true;
      if (i < roots.size()) width = std::max(width, Rational(roots[i].second - roots[i].first));
    }
    if (touching) {
      tol = width / pow_int(Rational(2), 64);
      continue;
    }
    const Rational want = gap / pow_int(Rational(2), 60);
    if (width <= want) break;
    tol = want / 4;
  }
  const size_t m = roots.size();
  for (size_t i = 0; i <= m; ++i) {
    Rational in_l = i == 0 ? a : roots[i - 1].second;
    Rational out_l = i == 0 ? a : roots[i - 1].first;
    Rational in_r = i == m ? b : roots[i].first;
    Rational out_r = i == m ? b : roots[i].second;
    // h has constant sign strictly between consecutive roots; touching brackets meet at a non-root
    const Rational probe = in_r > in_l ? (in_l + in_r) / 2 : in_l;
    if (in_r < in_l || h(probe) >= 0) continue;
    if (in_r > in_l) out.inner.parts.emplace_back(in_l, in_r);
    out.outer.parts.emplace_back(out_l, out_r);
  }
  out.inner.normalize();
  out.outer.normalize();
  return out;
}

std::pair<Rational, Rational> poly_sup(const Polynomial& p, const Rational& a, const Rational& b) {
  Rational lo = std::max(abs(p(a)), abs(p(b)));
  Rational hi = lo;
  Polynomial d = p.derivative();
  if (d.degree() >= 1) {
    const Rational tol = (b - a) / pow_int(Rational(2), 80);
    for (const auto& [l, r] : isolate_roots(d, a, b, tol)) {
      lo = std::max({lo, Rational(abs(p(l))), Rational(abs(p(r)))});
      auto [mn, mx] = p.range(l, r);
      hi = std::max({hi, Rational(abs(mn)), Rational(abs(mx))});
    }
  }
  return {lo, hi};
}

// Long-double interval arithmetic with outward rounding.
struct Iv {
  long double lo, hi;
};
Iv widen(long double lo, long double hi) {
  return {std::nextafter(lo, -std::numeric_limits<long double>::infinity()),
          std::nextafter(hi, std::numeric_limits<long double>::infinity())};
}
Iv from_rational(const Rational& q) {
  long double x = q.convert_to<long double>();
  return widen(x, x);
}
Iv add(const Iv& a, const Iv& b) { return widen(a.lo + b.lo, a.hi + b.hi); }
Iv mul(const Iv& a, const Iv& b) {
  long double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}
Iv abs_iv(const Iv& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return {-a.hi, -a.lo};
  return {0, std::max(-a.lo, a.hi)};
}

struct Box {
  RationalVector lo, hi;
  Rational volume() const {
    Rational v = 1;
    for (size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
  }
};

// Enclosure of |f| on a box (polynomial kinds and sup_of).
Iv abs_enclosure(const FunctionSpec& f, const Box& box) {
  using Kind = FunctionSpec::Kind;
  const int d = f.dimension();
  std::vector<Iv> xs;
  for (int i = 0; i < d; ++i) xs.push_back(widen(box.lo[i].convert_to<long double>(), box.hi[i].convert_to<long double>()));
  switch (f.kind()) {
    case Kind::kPolynomial: {
      const auto& c = f.poly().coeffs();
      Iv acc{0, 0};
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = add(mul(acc, xs[0]), from_rational(*it));
      return abs_iv(acc);
    }
    case Kind::kMultiPolynomial: {
      Iv acc{0, 0};
      for (const auto& [e, coeff] : f.terms()) {
        Iv t = from_rational(coeff);
        for (int i = 0; i < d; ++i) {
          for (int k = 0; k < e[i]; ++k) t = mul(t, xs[i]);
        }
        acc = add(acc, t);
      }
      return abs_iv(acc);
    }
    case Kind::kSupOf: {
      Iv m{0, 0};
      for (const auto& p : f.parts()) {
        Iv a = abs_enclosure(p, box);
        m.lo = std::max(m.lo, a.lo);
        m.hi = std::max(m.hi, a.hi);
      }
      return m;
    }
    case Kind::kCantorBad:
      break;
  }
  fail(ErrorCode::kInternal, "abs_enclosure: unsupported kind");
}

Box ball_box(const Ball& B) {
  Box b;
  for (size_t i = 0; i < B.center.size(); ++i) {
    b.lo.push_back(B.lo(static_cast<int>(i)));
    b.hi.push_back(B.hi(static_cast<int>(i)));
  }
  return b;
}

std::pair<Box, Box> split(const Box& b) {
  size_t axis = 0;
  for (size_t i = 1; i < b.lo.size(); ++i) {
    if (b.hi[i] - b.lo[i] > b.hi[axis] - b.lo[axis]) axis = i;
  }
  Rational m = (b.lo[axis] + b.hi[axis]) / 2;
  Box l = b, r = b;
  l.hi[axis] = m;
  r.lo[axis] = m;
  return {l, r};
}

constexpr int kMaxBoxes = 400000;

SupBounds grid_sup(const FunctionSpec& f, const Ball& B) {
  struct Node {
    Box box;
    long double upper;
  };
  auto center_value = [&](const Box& b) {
    RationalVector c;
    for (size_t i = 0; i < b.lo.size(); ++i) c.push_back((b.lo[i] + b.hi[i]) / 2);
    return Rational(abs(f.evaluate(c)));
  };
  Box root = ball_box(B);
  Rational lower = center_value(root);
  std::vector<Node> heap{{root, abs_enclosure(f, root).hi}};
  auto cmp = [](const Node& a, const Node& b) { return a.upper < b.upper; };
  int iterations = 0;
  const long double rel = std::ldexp(1.0L, -40);
  while (!heap.empty() && iterations < kMaxBoxes / 4) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Node top = heap.back();
    if (top.upper <= lower.convert_to<long double>() * (1 + rel)) {
      heap.push_back(top);
      std::push_heap(heap.begin(), heap.end(), cmp);
      break;
    }
    heap.pop_back();
    auto [l, r] = split(top.box);
    for (Box* b : {&l, &r}) {
      lower = std::max(lower, center_value(*b));
      heap.push_back({*b, abs_enclosure(f, *b).hi});
      std::push_heap(heap.begin(), heap.end(), cmp);
    }
    ++iterations;
  }
  long double upper = lower.convert_to<long double>();
  for (const auto& n : heap) upper = std::max(upper, n.upper);
  SupBounds s;
  s.lo = to_real(lower);
  s.hi = std::max(HighReal(upper), s.lo);
  s.log_lo = s.lo > 0 ? HighReal(log(s.lo)) : neg_infinity();
  s.log_hi = s.hi > 0 ? HighReal(log(s.hi)) : neg_infinity();
  return s;
}

// Adaptive box grid: inner counts boxes with |f| < t_lo surely, outer removes boxes with |f| >= t_hi surely.
std::pair<Rational, Rational> grid_sublevel(const FunctionSpec& f, const Ball& B, const Rational& t_lo,
                                            const Rational& t_hi) {
  const long double tl = t_lo.convert_to<long double>(), th = t_hi.convert_to<long double>();
  Rational inner = 0, excluded = 0;
  std::vector<std::pair<Box, int>> stack{{ball_box(B), 0}};
  const int max_depth = 8 * f.dimension() + 10;
  long boxes = 0;
  while (!stack.empty()) {
    auto [box, depth] = stack.back();
    stack.pop_back();
    ++boxes;
    Iv a = abs_enclosure(f, box);
    if (a.hi < tl) {
      inner += box.volume();
      continue;
    }
    if (a.lo >= th) {
      excluded += box.volume();
      continue;
    }
    if (depth >= max_depth || boxes > kMaxBoxes) continue;  // undecided mass
    auto [l, r] = split(box);
    stack.emplace_back(l, depth + 1);
    stack.emplace_back(r, depth + 1);
  }
  return {inner, B.volume() - excluded};
}

// Cantor: sublevel set of psi on an interval with log threshold lambda.
std::pair<Rational, Rational> cantor_sublevel(const CantorBad& c, const Rational& a, const Rational& b,
                                              const HighReal& lambda) {
  Rational inner = b - a, outer = b - a;
  for (const auto& J : c.removed) {
    if (J.b <= a || J.a >= b) continue;
    const Rational mid = (J.a + J.b) / 2, h = (J.b - J.a) / 2;
    const HighReal hr = to_real(h), logc = c.log_c(J.stage);
    auto g = [&](const HighReal& d) { return logc - 1 / ((hr - d) * (hr - d)) - 1 / ((hr + d) * (hr + d)); };
    if (g(HighReal(0)) < lambda) continue;  // psi_J < t on all of J
    HighReal lo = 0, hi = hr;               // g(lo) >= lambda > g(hi)
    const HighReal stop = hr * pow(HighReal(2), -110);
    while (hi - lo > stop) {
      HighReal m = (lo + hi) / 2;
      if (g(m) >= lambda) {
        lo = m;
      } else {
        hi = m;
      }
    }
    const Rational d_lo = to_rational(lo), d_hi = to_rational(hi);
    auto overlap = [&](const Rational& d) {
      Rational l = std::max(a, Rational(mid - d)), r = std::min(b, Rational(mid + d));
      return r > l ? Rational(r - l) : Rational(0);
    };
    inner -= overlap(d_hi);
    outer -= overlap(d_lo);
  }
  return {std::max(inner, Rational(0)), outer};
}

HighReal cantor_log_sup(const CantorBad& c, const Rational& a, const Rational& b) {
  HighReal best = neg_infinity();
  for (const auto& J : c.removed) {
    if (J.b <= a || J.a >= b) continue;
    const Rational mid = (J.a + J.b) / 2, h = (J.b - J.a) / 2;
    Rational l = std::max(a, J.a), r = std::min(b, J.b);
    Rational delta = mid < l ? Rational(l - mid) : (mid > r ? Rational(mid - r) : Rational(0));
    if (delta >= h) continue;
    HighReal hr = to_real(h), dr = to_real(delta);
    HighReal v = c.log_c(J.stage) - 1 / ((hr - dr) * (hr - dr)) - 1 / ((hr + dr) * (hr + dr));
    if (v > best) best = v;
  }
  return best;
}

void require_ball(const FunctionSpec& f, const Ball& B) {
  require(static_cast<int>(B.center.size()) == f.dimension(), ErrorCode::kDimensionMismatch,
          "ball dimension differs from the function's");
  require(B.radius > 0, ErrorCode::kInvalidArgument, "ball radius must be positive");
}

bool one_dim_exact(const FunctionSpec& f) {
  using Kind = FunctionSpec::Kind;
  if (f.dimension() != 1) return false;
  if (f.kind() == Kind::kPolynomial) return true;
  if (f.kind() == Kind::kSupOf) {
    return std::all_of(f.parts().begin(), f.parts().end(), [](const FunctionSpec& p) { return one_dim_exact(p); });
  }
  return false;
}

PolySublevel exact_1d_sublevel(const FunctionSpec& f, const Rational& a, const Rational& b, const Rational& t) {
  if (f.kind() == FunctionSpec::Kind::kPolynomial) return poly_sublevel(f.poly(), a, b, t);
  PolySublevel acc;
  acc.inner.parts.emplace_back(a, b);
  acc.outer.parts.emplace_back(a, b);
  for (const auto& p : f.parts()) {
    PolySublevel s = exact_1d_sublevel(p, a, b, t);
    acc.inner = acc.inner.intersect(s.inner);
    acc.outer = acc.outer.intersect(s.outer);
  }
  return acc;
}

std::pair<Rational, Rational> exact_1d_sup(const FunctionSpec& f, const Rational& a, const Rational& b) {
  if (f.kind() == FunctionSpec::Kind::kPolynomial) return poly_sup(f.poly(), a, b);
  Rational lo = 0, hi = 0;
  for (const auto& p : f.parts()) {
    auto [l, h] = exact_1d_sup(p, a, b);
    lo = std::max(lo, l);
    hi = std::max(hi, h);
  }
  return {lo, hi};
}

}  // namespace

SupBounds sup_on_ball(const FunctionSpec& f, const Ball& B) {
  require_ball(f, B);
  SupBounds s;
  if (f.kind() == FunctionSpec::Kind::kCantorBad) {
    s.log_lo = s.log_hi = cantor_log_sup(f.cantor(), B.lo(), B.hi());
    s.lo = s.hi = exp(s.log_lo);
    return s;
  }
  if (one_dim_exact(f)) {
    auto [lo, hi] = exact_1d_sup(f, B.lo(), B.hi());
    s.lo = to_real(lo);
    s.hi = to_real(hi);
    s.log_lo = safe_log(lo);
    s.log_hi = safe_log(hi);
    return s;
  }
  return grid_sup(f, B);
}

SublevelBounds sublevel_measure(const FunctionSpec& f, const Ball& B, const Rational& threshold) {
  require_ball(f, B);
  require(threshold > 0, ErrorCode::kInvalidArgument, "sublevel threshold must be positive");
  SublevelBounds s;
  SupBounds sup = sup_on_ball(f, B);
  s.log_sup_lo = sup.log_lo;
  s.log_sup_hi = sup.log_hi;
  s.zero_on_ball = sup.hi == 0;
  if (f.kind() == FunctionSpec::Kind::kCantorBad) {
    auto [in, out] = cantor_sublevel(f.cantor(), B.lo(), B.hi(), log_real(threshold));
    s.inner = in;
    s.outer = out;
  } else if (one_dim_exact(f)) {
    PolySublevel p = exact_1d_sublevel(f, B.lo(), B.hi(), threshold);
    s.inner = p.inner.measure();
    s.outer = p.outer.measure();
  } else {
    auto [in, out] = grid_sublevel(f, B, threshold, threshold);
    s.inner = in;
    s.outer = out;
  }
  return s;
}

SublevelBounds sublevel_relative(const FunctionSpec& f, const Ball& B, const Epsilon& eps) {
  require_ball(f, B);
  SublevelBounds s;
  SupBounds sup = sup_on_ball(f, B);
  s.log_sup_lo = sup.log_lo;
  s.log_sup_hi = sup.log_hi;
  if (sup.hi == 0) {
    s.zero_on_ball = true;  // {|f| < 0} is empty
    s.inner = s.outer = 0;
    return s;
  }
  if (f.kind() == FunctionSpec::Kind::kCantorBad) {
    auto [in, out] = cantor_sublevel(f.cantor(), B.lo(), B.hi(), sup.log_lo + eps.log());
    s.inner = in;
    s.outer = out;
    return s;
  }
  auto [e_lo, e_hi] = eps_bracket(eps);
  if (one_dim_exact(f)) {
    auto [lo, hi] = exact_1d_sup(f, B.lo(), B.hi());
    if (lo == 0) {
      s.inner = 0;
      s.outer = exact_1d_sublevel(f, B.lo(), B.hi(), e_hi * hi).outer.measure();
      return s;
    }
    s.inner = exact_1d_sublevel(f, B.lo(), B.hi(), e_lo * lo).inner.measure();
    s.outer = exact_1d_sublevel(f, B.lo(), B.hi(), e_hi * hi).outer.measure();
    return s;
  }
  auto [in, out] = grid_sublevel(f, B, e_lo * to_rational(sup.lo), e_hi * to_rational(sup.hi));
  s.inner = in;
  s.outer = out;
  return s;
}

// Profiles --------------------------------------------------------------------------

double GoodnessEntry::ratio_hi() const { return exp(log_ratio_hi).convert_to<double>(); }

double GoodnessProfile::C_hat() const { return exp(log_C_hat).convert_to<double>(); }

std::string GoodnessProfile::to_csv() const {
  std::ostringstream os;
  os << "ball_center,radius,alpha,eps,ratio,log_ratio\n";
  os.precision(17);
  for (const auto& e : entries) {
    std::string center;
    for (size_t i = 0; i < e.ball.center.size(); ++i) center += (i ? ";" : "") + to_string(e.ball.center[i]);
    os << center << "," << to_string(e.ball.radius) << "," << to_string(alpha) << "," << e.eps.label() << ","
       << e.ratio_hi() << "," << e.log_ratio_hi.convert_to<double>() << "\n";
  }
  return os.str();
}

GoodnessProfile goodness_profile(const FunctionSpec& f, const std::vector<Ball>& balls, const Rational& alpha,
                                 const std::vector<Epsilon>& eps_grid) {
  require(!balls.empty() && !eps_grid.empty(), ErrorCode::kInvalidArgument, "goodness_profile: empty grids");
  require(alpha > 0, ErrorCode::kInvalidArgument, "goodness_profile: alpha must be positive");
  GoodnessProfile prof;
  prof.alpha = alpha;
  prof.log_C_hat = neg_infinity();
  const HighReal a = to_real(alpha);
  for (const auto& B : balls) {
    const HighReal log_vol = log_real(B.volume());
    for (const auto& eps : eps_grid) {
      SublevelBounds s = sublevel_relative(f, B, eps);
      GoodnessEntry e{B, eps, neg_infinity(), neg_infinity()};
      const HighReal denom = a * eps.log() + log_vol;
      if (s.inner > 0) e.log_ratio_lo = log_real(s.inner) - denom;
      if (s.outer > 0) e.log_ratio_hi = log_real(s.outer) - denom;
      if (e.log_ratio_hi > prof.log_C_hat) prof.log_C_hat = e.log_ratio_hi;
      prof.entries.push_back(std::move(e));
    }
  }
  return prof;
}

NotGoodTable demonstrate_not_good(const FunctionSpec& f, const Rational& x0, const std::vector<Rational>& alphas,
                                  const Rational& r0, int halvings, const std::vector<Epsilon>& eps_grid, int side) {
  require(f.dimension() == 1, ErrorCode::kInvalidArgument, "demonstrate_not_good: one-dimensional functions only");
  require(r0 > 0 && halvings >= 1, ErrorCode::kInvalidArgument, "demonstrate_not_good: need r0 > 0 and halvings >= 1");
  require(!alphas.empty(), ErrorCode::kInvalidArgument, "demonstrate_not_good: no alphas");
  if (f.kind() == FunctionSpec::Kind::kCantorBad) {
    require(f.cantor().in_surviving_set(x0), ErrorCode::kInvalidArgument,
            "demonstrate_not_good: x0 must lie in the surviving set K_levels");
  }
  NotGoodTable table;
  for (const auto& alpha : alphas) {
    HighReal first = 0, last = 0;
    for (int i = 0; i <= halvings; ++i) {
      Rational r = r0 / pow_int(Rational(2), i);
      Ball B = side > 0 ? Ball::interval(x0, x0 + 2 * r) : side < 0 ? Ball::interval(x0 - 2 * r, x0) : Ball{{x0}, r};
      GoodnessProfile p = goodness_profile(f, {B}, alpha, eps_grid);
      table.rows.push_back({alpha, r, p.log_C_hat});
      if (i == 0) first = p.log_C_hat;
      last = p.log_C_hat;
    }
    table.log_growth.emplace_back(alpha, HighReal(last - first));
  }
  return table;
}

}  // namespace extremal
