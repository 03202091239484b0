#include "extremal/measure48.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "extremal/lattice.hpp"

namespace extremal {

namespace {

constexpr long kMaxQ = 1L << 16;
constexpr long double kMaxCandidates = 1e7L;

struct Shell {
  RationalVector btilde;               // (1, b)
  std::vector<long double> btilde_ld;
  Rational v;
  long Q = 0;
  long double K = 0;                   // last coordinate scale: K * Q^{-v} = 2Q
  long double threshold = 0;           // Q^{-v} in long double
};

Shell make_shell(const RationalVector& b, const Rational& v, long Q) {
  require(!b.empty(), ErrorCode::kInvalidArgument, "A-set: b must have length n-1 >= 1");
  require(Q >= 2 && Q <= kMaxQ, ErrorCode::kInvalidArgument, "A-set: Q must be in [2, 65536]");
  require(v > 0, ErrorCode::kInvalidArgument, "A-set: v must be positive");
  Shell s;
  s.btilde.push_back(Rational(1));
  for (const auto& x : b) s.btilde.push_back(x);
  for (const auto& x : s.btilde) s.btilde_ld.push_back(x.convert_to<long double>());
  s.v = v;
  s.Q = Q;
  const long double vd = v.convert_to<long double>();
  s.threshold = std::pow(static_cast<long double>(Q), -vd);
  s.K = 2.0L * Q / s.threshold;
  require(std::isfinite(s.K), ErrorCode::kInvalidArgument, "A-set: Q^{v+1} overflows");
  return s;
}

bool exact_member(const Shell& s, const std::vector<int64_t>& q, int64_t p, const Rational& x) {
  int64_t size = 0;
  for (int64_t c : q) size = std::max<int64_t>(size, std::llabs(c));
  if (size < s.Q || size >= 2 * s.Q) return false;
  Rational lambda = 0;
  for (size_t i = 0; i < q.size(); ++i) {
    if (q[i] != 0) lambda += s.btilde[i] * Rational(q[i]);
  }
  Rational val = abs(Rational(p) + lambda * x);
  return compare_with_power(val, Rational(s.Q), s.v) < 0;
}

// Lattice {(q, K(lambda(q) x + p))}: every member lies in the box [-2Q, 2Q]^{n+1}.
bool shell_member(const Shell& s, const Rational& x, long double x_ld) {
  const int n = static_cast<int>(s.btilde.size());
  const int d = n + 1;
  std::vector<std::vector<int64_t>> T(d, std::vector<int64_t>(d, 0));
  for (int i = 0; i < d; ++i) T[i][i] = 1;
  std::vector<std::vector<long double>> B(d, std::vector<long double>(d, 0.0L));
  auto rebuild = [&](int i) {
    long double lam = 0;
    for (int c = 0; c < n; ++c) {
      B[i][c] = static_cast<long double>(T[i][c]);
      lam += s.btilde_ld[c] * static_cast<long double>(T[i][c]);
    }
    B[i][n] = s.K * (x_ld * lam + static_cast<long double>(T[i][n]));
    return true;
  };
  for (int i = 0; i < d; ++i) rebuild(i);
  detail::lll_reduce<long double, int64_t>(B, T, rebuild);
  std::vector<long double> bounds = detail::coefficient_bounds<long double>(B);
  const long double R = 2.0L * s.Q;
  std::vector<long> radius(d);
  long double count = 1;
  for (int i = 0; i < d; ++i) {
    radius[i] = static_cast<long>(std::floor(R * bounds[i])) + 1;
    count *= 2.0L * radius[i] + 1;
  }
  require(count < kMaxCandidates, ErrorCode::kCertification, "A-set: lattice box too large");

  std::vector<long> c(d, 0);
  std::vector<int64_t> q(n);
  // odometer over the box, one of each ±c
  for (int i = 0; i < d; ++i) c[i] = -radius[i];
  while (true) {
    bool admissible = false;
    for (long x0 : c) {
      if (x0 != 0) {
        admissible = x0 > 0;
        break;
      }
    }
    if (admissible) {
      std::vector<int64_t> u(d, 0);
      for (int i = 0; i < d; ++i) {
        if (c[i] == 0) continue;
        for (int t = 0; t < d; ++t) u[t] += c[i] * T[i][t];
      }
      long double lam = 0;
      int64_t size = 0;
      for (int t = 0; t < n; ++t) {
        q[t] = u[t];
        size = std::max<int64_t>(size, std::llabs(u[t]));
        lam += s.btilde_ld[t] * static_cast<long double>(u[t]);
      }
      if (size >= s.Q && size < 2 * s.Q) {
        long double approx = std::fabs(x_ld * lam + static_cast<long double>(u[n]));
        if (approx < s.threshold * (1 + 1e-6L) + 1e-15L && exact_member(s, q, u[n], x)) return true;
      }
    }
    int i = d - 1;
    while (i >= 0 && c[i] == radius[i]) {
      c[i] = -radius[i];
      --i;
    }
    if (i < 0) break;
    ++c[i];
  }
  return false;
}

}  // namespace

bool in_A_set(const RationalVector& b, const Rational& v, long Q, const Rational& x) {
  Shell s = make_shell(b, v, Q);
  if (x == 0) return true;  // p = 0 with any q in the shell
  return shell_member(s, x, x.convert_to<long double>());
}

bool in_A_set_bruteforce(const RationalVector& b, const Rational& v, long Q, const Rational& x) {
  Shell s = make_shell(b, v, Q);
  const int n = static_cast<int>(s.btilde.size());
  const long L = 2 * Q - 1;
  require(std::pow(2.0L * L + 1, n) < 1e8L, ErrorCode::kInvalidArgument, "A-set brute force: shell too large");
  std::vector<int64_t> q(n, -L);
  while (true) {
    int64_t size = 0;
    for (int64_t c : q) size = std::max<int64_t>(size, std::llabs(c));
    if (size >= Q) {
      Rational lambda = 0;
      for (int i = 0; i < n; ++i) lambda += s.btilde[i] * Rational(q[i]);
      BigInt p = round_half_even(-lambda * x);
      if (p > -(int64_t(1) << 62) && p < (int64_t(1) << 62) && exact_member(s, q, p.convert_to<int64_t>(), x)) {
        return true;
      }
    }
    int i = n - 1;
    while (i >= 0 && q[i] == L) q[i--] = -L;
    if (i < 0) break;
    ++q[i];
  }
  return false;
}

MeasureEstimate measure_A_set(const RationalVector& b, const Rational& v, long Q, uint64_t samples, uint64_t seed,
                              int workers, uint64_t shard_size) {
  require(samples >= 1, ErrorCode::kInvalidArgument, "A-set: need at least one sample");
  require(shard_size >= 1, ErrorCode::kInvalidArgument, "A-set: shard size must be positive");
  const Shell s = make_shell(b, v, Q);
  const uint64_t shards = (samples + shard_size - 1) / shard_size;
  workers = std::max(1, workers);
  std::vector<uint64_t> hits(workers, 0);
  auto run = [&](int w) {
    for (uint64_t shard = static_cast<uint64_t>(w); shard < shards; shard += static_cast<uint64_t>(workers)) {
      std::mt19937_64 gen(seed + shard);
      const uint64_t count = std::min(shard_size, samples - shard * shard_size);
      for (uint64_t i = 0; i < count; ++i) {
        const uint64_t r = gen() >> 11;  // 53 bits
        const Rational x(BigInt(r), BigInt(1) << 53);
        const long double x_ld = std::ldexp(static_cast<long double>(r), -53);
        if (shell_member(s, x, x_ld)) ++hits[w];
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  MeasureEstimate e;
  e.Q = Q;
  e.samples = samples;
  for (uint64_t h : hits) e.hits += h;
  e.measure_hat = static_cast<double>(e.hits) / static_cast<double>(samples);
  e.halfwidth = 1.96 * std::sqrt(e.measure_hat * (1 - e.measure_hat) / static_cast<double>(samples));
  return e;
}

MeasureSweep measure_sweep(const RationalVector& b, const Rational& v, const std::vector<long>& Qs, uint64_t samples,
                           uint64_t seed, int workers) {
  require(Qs.size() >= 2, ErrorCode::kInvalidArgument, "measure sweep: need at least two Q values");
  MeasureSweep out;
  const double n = static_cast<double>(b.size() + 1);
  out.predicted_exponent = (n - v.convert_to<double>()) / 2;
  std::vector<double> xs, ys;
  for (long Q : Qs) {
    out.estimates.push_back(measure_A_set(b, v, Q, samples, seed, workers));
    const auto& e = out.estimates.back();
    if (e.hits == 0) {
      out.slope_defined = false;
      continue;
    }
    xs.push_back(std::log(static_cast<double>(Q)));
    ys.push_back(std::log(e.measure_hat));
  }
  if (!out.slope_defined || xs.size() < 2) {
    out.slope_defined = false;
    out.slope = 0;
    return out;
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  out.slope = sxy / sxx;
  return out;
}

}  // namespace extremal
