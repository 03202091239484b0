#include "extremal/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include "extremal/lattice.hpp"
#include "extremal/lattice_flow.hpp"

namespace extremal {

const char* to_string(ApproxMode mode) { return mode == ApproxMode::kStandard ? "standard" : "multiplicative"; }

namespace {

Rational witness_size(const IntVector& q, ApproxMode mode) {
  if (mode == ApproxMode::kStandard) return Rational(sup_norm(q));
  BigInt prod = 1;
  for (const auto& x : q) prod *= std::max(BigInt(abs(x)), BigInt(1));
  return Rational(prod);
}

void check_matrix(const RationalMatrix& A) {
  require(!A.empty() && !A[0].empty(), ErrorCode::kInvalidArgument, "empty matrix");
  for (const auto& row : A) {
    require(row.size() == A[0].size(), ErrorCode::kDimensionMismatch, "ragged matrix");
  }
}

// Odometer over [-Q, Q]^n in lexicographic order, first nonzero coordinate positive.
class HalfBox {
 public:
  HalfBox(int n, long Q) : q_(n, -Q), Q_(Q) {}
  // Advances to the next admissible vector; false when exhausted.
  bool next() {
    while (true) {
      if (!increment()) return false;
      if (admissible()) return true;
    }
  }
  const std::vector<long>& q() const { return q_; }

 private:
  bool increment() {
    if (!started_) {
      started_ = true;
      return true;
    }
    for (int i = static_cast<int>(q_.size()) - 1; i >= 0; --i) {
      if (q_[i] < Q_) {
        ++q_[i];
        return true;
      }
      q_[i] = -Q_;
    }
    return false;
  }
  bool admissible() const {
    for (long x : q_) {
      if (x != 0) return x > 0;
    }
    return false;
  }
  std::vector<long> q_;
  long Q_;
  bool started_ = false;
};

struct Best {
  bool set = false;
  std::vector<long> q;
};

template <class Int>
std::vector<IntVector> best_q_per_size(const std::vector<std::vector<Int>>& N, const Int& D, int n, long Q,
                                       ApproxMode mode, std::vector<Rational>* sizes_out) {
  const int m = static_cast<int>(N.size());
  std::map<int64_t, std::pair<Int, std::vector<long>>> best;  // size -> (quality numerator, q)
  std::vector<Int> r(m);
  HalfBox box(n, Q);
  while (box.next()) {
    const auto& q = box.q();
    Int quality = 0;
    for (int i = 0; i < m; ++i) {
      Int acc = 0;
      for (int j = 0; j < n; ++j) {
        if (q[j] != 0) acc += N[i][j] * Int(q[j]);
      }
      // distance of acc to the nearest multiple of D
      Int rem = acc % D;
      if (rem < 0) rem += D;
      Int dist = std::min<Int>(rem, D - rem);
      if (dist > quality) quality = dist;
    }
    int64_t size = 1;
    if (mode == ApproxMode::kStandard) {
      size = 0;
      for (long x : q) size = std::max<int64_t>(size, std::labs(x));
    } else {
      for (long x : q) size *= std::max(std::labs(x), 1L);
    }
    auto it = best.find(size);
    if (it == best.end()) {
      best.emplace(size, std::make_pair(quality, q));
    } else if (quality < it->second.first) {
      it->second = {quality, q};
    }
  }
  std::vector<IntVector> out;
  sizes_out->clear();
  for (auto& [size, entry] : best) {
    out.emplace_back(entry.second.begin(), entry.second.end());
    sizes_out->emplace_back(BigInt(size));
  }
  return out;
}

}  // namespace

ApproxWitness evaluate_witness(const RationalMatrix& A, const IntVector& q, ApproxMode mode) {
  check_matrix(A);
  const int m = static_cast<int>(A.size()), n = static_cast<int>(A[0].size());
  require(static_cast<int>(q.size()) == n, ErrorCode::kDimensionMismatch, "witness q length must equal columns of A");
  require(sup_norm(q) != 0, ErrorCode::kInvalidArgument, "witness q must be nonzero");
  ApproxWitness w;
  w.q = q;
  w.mode = mode;
  w.quality = 0;
  for (int i = 0; i < m; ++i) {
    Rational aq = 0;
    for (int j = 0; j < n; ++j) aq += A[i][j] * Rational(q[j]);
    bool tie = false;
    BigInt p = round_half_even(-aq, &tie);
    w.tie = w.tie || tie;
    w.p.push_back(p);
    w.quality = std::max(w.quality, Rational(abs(aq + Rational(p))));
  }
  w.size = witness_size(q, mode);
  return w;
}

std::vector<ApproxWitness> pareto_frontier(std::vector<ApproxWitness> points) {
  std::stable_sort(points.begin(), points.end(), [](const ApproxWitness& a, const ApproxWitness& b) {
    if (a.size != b.size) return a.size < b.size;
    return a.quality < b.quality;
  });
  std::vector<ApproxWitness> out;
  for (auto& p : points) {
    if (out.empty() || p.quality < out.back().quality) {
      if (!out.empty() && out.back().size == p.size) continue;
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<ApproxWitness> best_per_size(const RationalMatrix& A, long Q, ApproxMode mode) {
  check_matrix(A);
  require(Q >= 1, ErrorCode::kInvalidArgument, "Q must be >= 1");
  const int m = static_cast<int>(A.size()), n = static_cast<int>(A[0].size());
  require(n <= 6, ErrorCode::kInvalidArgument, "best_approx: at most 6 columns");
  long double box = std::pow(2.0L * Q + 1, n);
  require(box < 4e9L, ErrorCode::kInvalidArgument, "best_approx: enumeration box too large");
  BigInt D = 1;
  for (const auto& row : A) {
    for (const auto& a : row) D = lcm_of(D, denominator(a));
  }
  std::vector<std::vector<BigInt>> N(m, std::vector<BigInt>(n));
  BigInt maxN = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      N[i][j] = numerator(A[i][j]) * (D / denominator(A[i][j]));
      maxN = std::max(maxN, BigInt(abs(N[i][j])));
    }
  }
  std::vector<Rational> sizes;
  std::vector<IntVector> qs;
  if (maxN * BigInt(Q) * BigInt(n) + D < BigInt(1) << 62) {
    std::vector<std::vector<int64_t>> N64(m, std::vector<int64_t>(n));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) N64[i][j] = N[i][j].convert_to<int64_t>();
    }
    qs = best_q_per_size<int64_t>(N64, D.convert_to<int64_t>(), n, Q, mode, &sizes);
  } else {
    qs = best_q_per_size<BigInt>(N, D, n, Q, mode, &sizes);
  }
  std::vector<ApproxWitness> out;
  for (const auto& q : qs) out.push_back(evaluate_witness(A, q, mode));
  return out;
}

std::vector<ApproxWitness> best_approx(const RationalMatrix& A, long Q) {
  return pareto_frontier(best_per_size(A, Q, ApproxMode::kStandard));
}

std::vector<ApproxWitness> multiplicative_best(const RationalVector& y, long Q) {
  return pareto_frontier(best_per_size(RationalMatrix{y}, Q, ApproxMode::kMultiplicative));
}

double trail_slope(const std::vector<ApproxWitness>& trail, double min_size) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& w : trail) {
    if (w.quality == 0) return std::numeric_limits<double>::infinity();
    double s = to_double(w.size);
    if (s < min_size) continue;
    pts.emplace_back(log_abs(w.size), -log_abs(w.quality));
  }
  if (pts.empty()) return 0;
  if (pts.size() == 1) return pts[0].second / pts[0].first;
  double mx = 0, my = 0;
  for (auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0, sxx = 0;
  for (auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0) return my / mx;
  return sxy / sxx;
}

ExponentEstimate exponent_estimate(const RationalMatrix& A, const std::vector<long>& Q_schedule, ApproxMode mode,
                                   const std::vector<IntVector>& injected_q) {
  require(!Q_schedule.empty(), ErrorCode::kInvalidArgument, "exponent_estimate: empty schedule");
  for (size_t i = 1; i < Q_schedule.size(); ++i) {
    require(Q_schedule[i] > Q_schedule[i - 1], ErrorCode::kInvalidArgument, "Q schedule must be increasing");
  }
  check_matrix(A);
  require(mode == ApproxMode::kStandard || A.size() == 1, ErrorCode::kInvalidArgument,
          "multiplicative mode expects a row vector");
  const double scale = mode == ApproxMode::kMultiplicative ? static_cast<double>(A[0].size()) : 1.0;
  std::vector<ApproxWitness> injected;
  for (const auto& q : injected_q) {
    ApproxWitness w = evaluate_witness(A, q, mode);
    w.injected = true;
    injected.push_back(std::move(w));
  }
  ExponentEstimate est;
  std::vector<ApproxWitness> full;
  if (mode == ApproxMode::kStandard) full = best_per_size(A, Q_schedule.back(), mode);
  double running = -std::numeric_limits<double>::infinity();
  for (long Q : Q_schedule) {
    std::vector<ApproxWitness> points;
    if (mode == ApproxMode::kStandard) {
      for (const auto& w : full) {
        if (w.size <= Q) points.push_back(w);
      }
    } else {
      points = best_per_size(A, Q, mode);
    }
    points.insert(points.end(), injected.begin(), injected.end());
    std::vector<ApproxWitness> trail = pareto_frontier(std::move(points));
    double slope = trail_slope(trail) * scale;
    running = std::max(running, slope);
    est.omega_by_Q.emplace_back(Q, running);
    est.witness_trail = std::move(trail);
  }
  est.omega_hat = running;
  est.cutoff_Q = Q_schedule.back();
  return est;
}

// Test numbers ---------------------------------------------------------------

TestNumber golden_number(long digits) {
  require(digits >= 1 && digits <= 100000, ErrorCode::kInvalidArgument, "digits out of range");
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits));
  // floor(phi * 10^P) = floor((10^P + floor(sqrt(5 * 10^{2P}))) / 2)
  BigInt s = isqrt(BigInt(5) * scale * scale);
  BigInt num = (scale + s) / 2;
  return TestNumber{Rational(num, scale), Rational(1, scale), false,
                    "golden ratio truncated to " + std::to_string(digits) + " decimals"};
}

TestNumber sqrt2_number(long digits) {
  require(digits >= 1 && digits <= 100000, ErrorCode::kInvalidArgument, "digits out of range");
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits));
  BigInt s = isqrt(BigInt(2) * scale * scale);
  return TestNumber{Rational(s, scale), Rational(1, scale), false,
                    "sqrt(2) truncated to " + std::to_string(digits) + " decimals"};
}

TestNumber liouville_number(long base, int depth) {
  require(base >= 2 && depth >= 1 && depth <= 7, ErrorCode::kInvalidArgument, "liouville: bad base/depth");
  Rational v = 0;
  long fact = 1;
  for (int k = 1; k <= depth; ++k) {
    fact *= k;
    v += pow_int(Rational(base), -fact);
  }
  return TestNumber{v, 0, true,
                    "liouville(" + std::to_string(base) + "," + std::to_string(depth) + ") = sum_{k<=" +
                        std::to_string(depth) + "} " + std::to_string(base) + "^{-k!}"};
}

TestNumber lacunary_number(long base, long ratio, int depth) {
  require(base >= 2 && ratio >= 2 && depth >= 1, ErrorCode::kInvalidArgument, "lacunary: bad parameters");
  Rational v = 0;
  long e = 1;
  for (int k = 1; k <= depth; ++k) {
    e *= ratio;
    require(e < 100000, ErrorCode::kInvalidArgument, "lacunary: exponent too large");
    v += pow_int(Rational(base), -e);
  }
  return TestNumber{v, 0, true,
                    "lacunary(" + std::to_string(base) + "," + std::to_string(ratio) + "," + std::to_string(depth) + ")"};
}

TestNumber rational_number(const Rational& value) { return TestNumber{value, 0, true, "rational " + to_string(value)}; }

TestNumber random_number(uint64_t seed, long digits) {
  require(digits >= 1 && digits <= 10000, ErrorCode::kInvalidArgument, "digits out of range");
  std::mt19937_64 rng(seed);
  std::string s;
  while (static_cast<long>(s.size()) < digits) s += static_cast<char>('0' + rng() % 10);
  BigInt num(s);
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits));
  return TestNumber{Rational(num, scale), 0, true,
                    "random(seed=" + std::to_string(seed) + ", digits=" + std::to_string(digits) + ")"};
}

TestNumber parse_test_number(const std::string& token, long digits) {
  std::vector<std::string> parts;
  std::stringstream ss(token);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  require(!parts.empty(), ErrorCode::kInvalidArgument, "empty number token");
  auto num = [&](size_t i) {
    require(i < parts.size(), ErrorCode::kInvalidArgument, "missing parameter in number token: " + token);
    return std::stol(parts[i]);
  };
  const std::string& kind = parts[0];
  if (kind == "golden") return golden_number(parts.size() > 1 ? num(1) : digits);
  if (kind == "sqrt2") return sqrt2_number(parts.size() > 1 ? num(1) : digits);
  if (kind == "liouville") return liouville_number(num(1), static_cast<int>(num(2)));
  if (kind == "lacunary") return lacunary_number(num(1), num(2), static_cast<int>(num(3)));
  if (kind == "random") return random_number(static_cast<uint64_t>(num(1)), parts.size() > 2 ? num(2) : digits);
  return rational_number(parse_rational(token));
}

long minimal_digits(long Q, const Rational& v_max) {
  // need 10^{-P} < 1/2 Q^{-(v+1)}  <=>  P > log10(2) + (v+1) log10(Q)
  double needed = std::log10(2.0) + (to_double(v_max) + 1) * std::log10(static_cast<double>(Q));
  long P = static_cast<long>(std::floor(needed)) + 1;
  // confirm exactly
  while (true) {
    Rational eps = pow_int(Rational(10), -P);
    Rational bound = Rational(1, 2);
    if (compare_with_power(eps / bound, Rational(Q), v_max + 1) < 0) return P;
    ++P;
  }
}

void check_truncation(const TestNumber& number, long Q, const Rational& v_max) {
  if (number.exact || number.error_bound == 0) return;
  // eps < 1/2 Q^{-(v_max+1)}
  if (compare_with_power(number.error_bound * 2, Rational(Q), v_max + 1) < 0) return;
  fail(ErrorCode::kPrecision, "truncation too coarse for Q=" + std::to_string(Q) + ", v_max=" + to_string(v_max) +
                                  " (" + number.provenance + "); minimal sufficient precision: " +
                                  std::to_string(minimal_digits(Q, v_max)) + " decimal digits");
}

std::vector<IntVector> liouville_convergents(long base, int depth, int dimension, int coordinate) {
  std::vector<IntVector> out;
  long fact = 1;
  for (int k = 1; k < depth; ++k) {
    fact *= k;
    IntVector q(dimension, BigInt(0));
    q[coordinate] = boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(fact));
    out.push_back(q);
  }
  return out;
}

// Homogeneous sets ------------------------------------------------------------

bool HomogeneousSet::contains(const HomogeneousPoint& point) const {
  const int n = static_cast<int>(y_.size());
  if (mode_ == ApproxMode::kMultiplicative) {
    if (static_cast<int>(point.z.size()) != n) return false;
    Rational yq = 0;
    for (int i = 0; i < n; ++i) {
      if (denominator(point.z[i]) != 1) return false;
      yq += y_[i] * point.z[i];
    }
    return denominator(Rational(point.x - yq)) == 1;
  }
  // standard: z = ||q|| for some integer q with yq + p = x
  if (point.z.size() != 1 || denominator(point.z[0]) != 1 || point.z[0] < 0) return false;
  long r = point.z[0].convert_to<long>();
  if (r == 0) return denominator(point.x) == 1;
  HalfBox box(n, r);
  while (box.next()) {
    long s = 0;
    for (long x : box.q()) s = std::max(s, std::labs(x));
    if (s != r) continue;
    Rational yq = 0;
    for (int i = 0; i < n; ++i) yq += y_[i] * box.q()[i];
    if (denominator(Rational(point.x - yq)) == 1 || denominator(Rational(point.x + yq)) == 1) return true;
  }
  return false;
}

std::vector<HomogeneousPoint> HomogeneousSet::enumerate(long Q, const Rational& x_bound) const {
  const int n = static_cast<int>(y_.size());
  std::vector<HomogeneousPoint> out;
  HalfBox box(n, Q);
  while (box.next()) {
    Rational yq = 0;
    RationalVector qv;
    long s = 0;
    for (int i = 0; i < n; ++i) {
      yq += y_[i] * box.q()[i];
      qv.emplace_back(box.q()[i]);
      s = std::max(s, std::labs(box.q()[i]));
    }
    BigInt lo = ceil_of(-x_bound - yq), hi = floor_of(x_bound - yq);
    for (BigInt p = lo; p <= hi; ++p) {
      HomogeneousPoint pt;
      pt.x = yq + Rational(p);
      pt.z = mode_ == ApproxMode::kStandard ? RationalVector{Rational(s)} : qv;
      out.push_back(std::move(pt));
    }
  }
  return out;
}

bool HomogeneousSet::check_homogeneous(long Q, const Rational& x_bound) const {
  auto pts = enumerate(Q, x_bound);
  for (const auto& pt : pts) {
    for (int k = 2; k <= 3; ++k) {
      HomogeneousPoint scaled{pt.x * k, {}};
      for (const auto& z : pt.z) scaled.z.push_back(z * k);
      if (!contains(scaled)) return false;
    }
  }
  // discreteness: the bounded window holds finitely many points, each distinct
  return pts.size() < 100000000;
}

// approximation <-> short vector transfer -------------------------------------------------------------

Rational lemma21_gamma(const Rational& a, const Rational& b, const Rational& v) { return (b * v - a) / (v + 1); }

Rational lemma21_exponent(const Rational& a, const Rational& b, const Rational& gamma) {
  require(gamma < b, ErrorCode::kInvalidArgument, "gamma must be < b");
  return (a + gamma) / (b - gamma);
}

Lemma21Result lemma21_forward(const Rational& a, const Rational& b, const Rational& v, const Rational& x,
                              const Rational& z) {
  require(a > 0 && b > 0, ErrorCode::kInvalidArgument, "lemma21: a, b must be positive");
  require(z != 0, ErrorCode::kInvalidArgument, "lemma21: z must be nonzero");
  require(v > -1, ErrorCode::kInvalidArgument, "lemma21: v must exceed -1");
  require(le_power(abs(x), abs(z), v), ErrorCode::kInvalidArgument, "lemma21: witness does not satisfy |x| <= |z|^{-v}");
  Lemma21Result r;
  r.gamma = lemma21_gamma(a, b, v);
  require(r.gamma < b, ErrorCode::kInvalidArgument, "lemma21: gamma >= b");
  // e^{(b-γ)t} = |z|
  r.exp_t = PowerProduct::power(abs(z), 1 / (b - r.gamma));
  Magnitude first{abs(x), r.exp_t.pow(a)};
  Magnitude second{abs(z), r.exp_t.pow(-b)};
  r.lhs = first.compare(second) >= 0 ? first : second;
  r.rhs = Magnitude{1, r.exp_t.pow(-r.gamma)};
  r.certified = r.lhs.compare(r.rhs) <= 0;
  HighReal rr = r.rhs.to_real();
  r.margin = rr == 0 ? 0.0 : static_cast<double>((r.lhs.to_real() / rr).convert_to<double>());
  return r;
}

Lemma51Result lemma51_forward(const Rational& v, const Rational& x, const RationalVector& z) {
  const int n = static_cast<int>(z.size());
  require(n >= 1, ErrorCode::kInvalidArgument, "lemma51: empty z");
  require(v > n, ErrorCode::kInvalidArgument, "lemma51: v must exceed n");
  Rational prod = 1;
  for (const auto& zi : z) prod *= abs_plus(zi);
  require(le_power(abs(x), prod, v / n), ErrorCode::kInvalidArgument,
          "lemma51: witness does not satisfy |x| <= Pi_+(z)^{-v/n}");
  Lemma51Result r;
  r.gamma = (v - n) / (Rational(n) * (v + 1));
  r.degenerate = prod == 1;
  r.exp_t = PowerProduct::power(prod, 1 / (1 - Rational(n) * r.gamma));
  PowerProduct e_gamma_t = r.exp_t.pow(r.gamma);
  PowerProduct product;
  for (const auto& zi : z) {
    r.exp_t_i.push_back(e_gamma_t * PowerProduct::of(abs_plus(zi)));
    product = product * r.exp_t_i.back();
  }
  r.sum_identity = product == r.exp_t;
  Magnitude bound{1, r.exp_t.pow(-r.gamma)};
  bool ok = Magnitude{abs(x), r.exp_t}.compare(bound) <= 0;
  for (int i = 0; i < n; ++i) ok = ok && Magnitude{abs(z[i]), r.exp_t_i[i].inverse()}.compare(bound) <= 0;
  r.certified = ok;
  return r;
}

std::vector<GridCertificate> grid_certificates(const RationalVector& y, const Rational& gamma, const Rational& base,
                                               long k_max, const Rational& v_back) {
  const int n = static_cast<int>(y.size());
  require(base > 1, ErrorCode::kInvalidArgument, "grid: base must exceed 1");
  std::vector<GridCertificate> out;
  for (long k = 1; k <= k_max; ++k) {
    LatticeBasis L = flowed_lattice_exact(y, base, k);
    ShortestVector sv = shortest_vector(L.rows, 1L << 40);
    // δ ≤ e^{-γt} with e^t = base^{nk}
    Magnitude delta = Magnitude::exact(sv.norm);
    Magnitude bound = Magnitude::power(base, -gamma * n * k);
    if (delta.compare(bound) > 0) continue;
    GridCertificate c;
    c.k = k;
    c.p = sv.coefficients[0];
    c.q.assign(sv.coefficients.begin() + 1, sv.coefficients.end());
    Rational x = Rational(c.p);
    for (int i = 0; i < n; ++i) x += y[i] * Rational(c.q[i]);
    c.x = x;
    c.z = Rational(sup_norm(c.q));
    c.maps_back = c.z != 0 && le_power(abs(c.x), c.z, v_back);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace extremal
