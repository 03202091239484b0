#include "extremal/extremality_criteria.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "extremal/plucker_kernel.hpp"

namespace extremal {

namespace {

using kernel::Int128;

constexpr int kMaxAmbient = 6;

std::string json_rational(const Rational& q) { return to_string(q); }

double log_of(int64_t x) { return std::log(static_cast<double>(x)); }
double log_of(const BigInt& x) {
  long e = 0;
  double m = mpz_get_d_2exp(&e, x.backend().data());
  return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

MultiVector multivector_from_dense(int k, int j, const int64_t* coeffs) {
  MultiVector w(k - 1, j);
  const auto sets = subsets_of_size(k - 1, j);
  for (size_t i = 0; i < sets.size(); ++i) {
    if (coeffs[i] != 0) w.set(sets[i], Rational(coeffs[i]));
  }
  return w;
}

RationalVector dense_of(int k, int j, const int64_t* coeffs) {
  const int size = static_cast<int>(kernel::subset_table(k, j).size());
  RationalVector out;
  for (int i = 0; i < size; ++i) out.emplace_back(coeffs[i]);
  return out;
}

// Canonical half-box [-B, B]^k vectors: first nonzero coordinate positive.
std::vector<int64_t> half_box_vectors(int k, int B) {
  std::vector<int64_t> out;
  std::vector<int64_t> v(k, -B);
  while (true) {
    bool admissible = false;
    for (int64_t x : v) {
      if (x != 0) {
        admissible = x > 0;
        break;
      }
    }
    if (admissible) out.insert(out.end(), v.begin(), v.end());
    int i = k - 1;
    while (i >= 0 && v[i] == B) v[i--] = -B;
    if (i < 0) break;
    ++v[i];
  }
  return out;
}

// Wedges of `grade`-tuples of distinct half-box vectors with nonzero product,
// for first indices congruent to `worker` mod `workers`. emit(wedge, tuple) -> continue?
template <class Emit>
bool for_each_tuple_wedge(int k, int grade, const std::vector<int64_t>& V, int worker, int workers, Emit&& emit) {
  const size_t count = V.size() / k;
  const int size_final = kernel::subset_table(k, grade).size();
  std::vector<std::vector<int64_t>> partial(grade + 1);
  std::vector<const kernel::WedgeStepPlan*> plans(grade + 1, nullptr);
  for (int g = 1; g <= grade; ++g) partial[g].assign(kernel::subset_table(k, g).size(), 0);
  for (int g = 1; g < grade; ++g) plans[g] = &kernel::wedge_step_plan(k, g);
  std::vector<size_t> idx(grade + 1, 0);
  std::vector<int64_t> tuple(static_cast<size_t>(grade) * k);
  std::vector<int64_t> out(size_final);

  auto finish = [&](const std::vector<int64_t>& w) {
    std::copy(w.begin(), w.end(), out.begin());
    kernel::canonicalize(out.data(), size_final);
    return emit(out.data(), tuple.data());
  };

  // Explicit stack: level g means g vectors chosen.
  std::function<bool(int, size_t)> descend = [&](int g, size_t start) -> bool {
    for (size_t i = start; i < count; ++i) {
      const int64_t* vi = &V[i * k];
      std::copy(vi, vi + k, tuple.begin() + static_cast<long>(g) * k);
      kernel::wedge_step<int64_t>(*plans[g], partial[g].data(), vi, partial[g + 1].data());
      bool zero = std::all_of(partial[g + 1].begin(), partial[g + 1].end(), [](int64_t x) { return x == 0; });
      if (zero) continue;
      if (g + 1 == grade) {
        if (!finish(partial[g + 1])) return false;
      } else if (!descend(g + 1, i + 1)) {
        return false;
      }
    }
    return true;
  };

  for (size_t i0 = static_cast<size_t>(worker); i0 < count; i0 += static_cast<size_t>(workers)) {
    const int64_t* v0 = &V[i0 * k];
    std::copy(v0, v0 + k, partial[1].begin());
    std::copy(v0, v0 + k, tuple.begin());
    if (grade == 1) {
      if (!emit(partial[1].data(), tuple.data())) return false;
      continue;
    }
    if (!descend(1, i0 + 1)) return false;
  }
  return true;
}

// Streams canonical grade-j representatives from the chosen source.
// emit(worker, coeffs, tuple, tuple_count) -> continue?
template <class Emit>
uint64_t for_each_rep(int k, int j, int B, const EnumerateOptions& options, Emit&& emit) {
  require(k >= 2 && k <= kMaxAmbient, ErrorCode::kInvalidArgument, "enumerate_reps: ambient k must be in [2, 6]");
  require(j >= 1 && j <= k - 1, ErrorCode::kInvalidArgument,
          "enumerate_reps: grade must be in [1, k-1]; full rank is excluded");
  require(B >= 1 && B <= 64, ErrorCode::kInvalidArgument, "enumerate_reps: coeff_bound must be in [1, 64]");
  const bool complement = options.source == RepSource::kComplementBox;
  const int tuple_grade = complement ? k - j : j;
  const int size = kernel::subset_table(k, j).size();
  const std::vector<int64_t> V = half_box_vectors(k, B);
  const int workers = options.dedup ? 1 : std::max(1, options.workers);

  std::atomic<uint64_t> emitted{0};
  std::atomic<bool> stop{false};

  auto run_worker = [&](int worker) {
    std::set<std::vector<int64_t>> seen;
    std::vector<int64_t> star(size);
    for_each_tuple_wedge(k, tuple_grade, V, worker, workers, [&](const int64_t* w, const int64_t* tuple) {
      if (stop.load(std::memory_order_relaxed)) return false;
      const int64_t* rep = w;
      if (complement) {
        kernel::hodge_star(k, tuple_grade, w, star.data());
        kernel::canonicalize(star.data(), size);
        rep = star.data();
      }
      if (options.dedup && !seen.emplace(rep, rep + size).second) return true;
      emitted.fetch_add(1, std::memory_order_relaxed);
      if (!emit(worker, rep, tuple, tuple_grade)) {
        stop = true;
        return false;
      }
      return true;
    });
  };

  if (workers == 1) {
    run_worker(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run_worker, w);
    for (auto& t : threads) t.join();
  }
  return emitted.load();
}

BigInt ext_gcd(const BigInt& a, const BigInt& b, BigInt* x, BigInt* y) {
  BigInt old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  *x = old_s;
  *y = old_t;
  return old_r;
}

int64_t max_abs_coefficient(int k, int grade, int B) {
  // |minor| <= grade! * B^grade
  int64_t f = 1;
  for (int i = 2; i <= grade; ++i) f *= i;
  int64_t p = 1;
  for (int i = 0; i < grade; ++i) p *= B;
  (void)k;
  return f * p;
}

void require_spec(const SubspaceSpec& spec) { spec.validate(); }

Violation make_violation(int k, int j, const int64_t* coeffs, const IndexSet& I, const Rational& lhs,
                         const Rational& outer, const Rational& v) {
  Violation viol;
  viol.grade = j;
  viol.w_coeffs = dense_of(k, j, coeffs);
  viol.I = I;
  viol.lhs = lhs;
  viol.rhs = Magnitude::power(outer, -v);
  viol.note = "max_{0 notin I}|w_I| = " + to_string(outer);
  return viol;
}

IndexSet zero_set(int k, int j, const kernel::CPlan& plan, int z) {
  return IndexSet::from_mask(kernel::subset_table(k, j).masks[plan.zero_sets[z]], k - 1);
}

}  // namespace

void SubspaceSpec::validate() const {
  require(n >= 2 && n + 1 <= kMaxAmbient, ErrorCode::kInvalidArgument, "subspace: n must be in [2, 5]");
  require(s >= 0 && s <= n - 1, ErrorCode::kInvalidArgument, "subspace: s must satisfy 0 <= s < n");
  require(static_cast<int>(A.size()) == s + 1, ErrorCode::kDimensionMismatch, "subspace: A must have s+1 rows");
  for (const auto& row : A) {
    require(static_cast<int>(row.size()) == n - s, ErrorCode::kDimensionMismatch, "subspace: A must have n-s columns");
  }
}

const char* to_string(Verdict v) { return v == Verdict::kViolated ? "violated" : "holds-at-scale"; }
const char* to_string(RepSource s) { return s == RepSource::kBasisBox ? "basis-box" : "complement-box"; }

void CriterionReport::add_violation(Violation v, size_t max_recorded) {
  verdict = Verdict::kViolated;
  ++violation_count;
  if (violations.size() < max_recorded) violations.push_back(std::move(v));
}

nlohmann::json CriterionReport::to_json() const {
  nlohmann::json j;
  j["criterion"] = criterion;
  j["params"] = params;
  j["cutoffs"] = cutoffs;
  j["search_space"] = search_space;
  j["verdict"] = to_string(verdict);
  j["examined"] = examined;
  j["violation_count"] = violation_count;
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : violations) {
    nlohmann::json e;
    e["grade"] = v.grade;
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : v.w_coeffs) coeffs.push_back(json_rational(c));
    e["w_coeffs"] = coeffs;
    e["I"] = v.I ? nlohmann::json(v.I->to_string()) : nlohmann::json(nullptr);
    e["lhs"] = json_rational(v.lhs);
    Rational r;
    if (v.rhs.factor.is_rational(&r)) {
      e["rhs"] = json_rational(v.rhs.coefficient * r);
    } else {
      e["rhs"] = v.rhs.to_string();
    }
    std::ostringstream dec;
    dec.precision(17);
    dec << v.rhs.to_real().convert_to<double>();
    e["rhs_decimal"] = dec.str();
    if (!v.note.empty()) e["note"] = v.note;
    vs.push_back(e);
  }
  j["violations"] = vs;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  return j;
}

uint64_t enumerate_reps(int k, int j, int coeff_bound, const EnumerateOptions& options,
                        const std::function<bool(const RepView&)>& callback) {
  return for_each_rep(k, j, coeff_bound, options,
                      [&](int worker, const int64_t* coeffs, const int64_t* tuple, int tuple_count) {
                        RepView view;
                        view.k = k;
                        view.j = j;
                        view.coeffs = coeffs;
                        view.size = kernel::subset_table(k, j).size();
                        view.tuple = tuple;
                        view.tuple_count = tuple_count;
                        view.source = options.source;
                        view.worker = worker;
                        return callback(view);
                      });
}

std::vector<SubgroupRep> enumerate_reps(int k, int j, int coeff_bound, const EnumerateOptions& options) {
  EnumerateOptions single = options;
  single.workers = 1;
  std::vector<SubgroupRep> out;
  enumerate_reps(k, j, coeff_bound, single, [&](const RepView& view) {
    out.push_back(materialize(view));
    return true;
  });
  return out;
}

std::vector<IntVector> integer_kernel_basis(const std::vector<IntVector>& rows, int k) {
  require(k >= 1, ErrorCode::kInvalidArgument, "kernel: k must be positive");
  for (const auto& r : rows) require(static_cast<int>(r.size()) == k, ErrorCode::kDimensionMismatch, "kernel: row length");
  std::vector<std::vector<BigInt>> M(rows.size(), std::vector<BigInt>(k));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int c = 0; c < k; ++c) M[i][c] = rows[i][c];
  }
  std::vector<std::vector<BigInt>> V(k, std::vector<BigInt>(k, 0));  // V[row][col]
  for (int i = 0; i < k; ++i) V[i][i] = 1;
  auto combine_columns = [&](int a, int b, const BigInt& x, const BigInt& y, const BigInt& u, const BigInt& w) {
    // col_a <- x col_a + y col_b ; col_b <- u col_a + w col_b
    for (auto& row : M) {
      BigInt na = x * row[a] + y * row[b], nb = u * row[a] + w * row[b];
      row[a] = na;
      row[b] = nb;
    }
    for (auto& row : V) {
      BigInt na = x * row[a] + y * row[b], nb = u * row[a] + w * row[b];
      row[a] = na;
      row[b] = nb;
    }
  };
  int piv = 0;
  for (size_t i = 0; i < M.size() && piv < k; ++i) {
    for (int c = piv + 1; c < k; ++c) {
      if (M[i][c] == 0) continue;
      BigInt a = M[i][piv], b = M[i][c], x, y;
      BigInt g = ext_gcd(a, b, &x, &y);
      combine_columns(piv, c, x, y, BigInt(-b / g), BigInt(a / g));
    }
    if (M[i][piv] != 0) ++piv;
  }
  std::vector<IntVector> basis;
  for (int c = piv; c < k; ++c) {
    IntVector v(k);
    for (int r = 0; r < k; ++r) v[r] = V[r][c];
    basis.push_back(std::move(v));
  }
  return basis;
}

SubgroupRep materialize(const RepView& view) {
  require(view.coeffs != nullptr && view.tuple != nullptr, ErrorCode::kInvalidArgument, "materialize: empty view");
  const int k = view.k;
  MultiVector w = multivector_from_dense(k, view.j, view.coeffs);
  std::vector<IntVector> basis;
  if (view.source == RepSource::kBasisBox) {
    for (int t = 0; t < view.tuple_count; ++t) {
      basis.emplace_back(view.tuple + static_cast<long>(t) * k, view.tuple + static_cast<long>(t + 1) * k);
    }
  } else {
    std::vector<IntVector> rows;
    for (int t = 0; t < view.tuple_count; ++t) {
      rows.emplace_back(view.tuple + static_cast<long>(t) * k, view.tuple + static_cast<long>(t + 1) * k);
    }
    basis = integer_kernel_basis(rows, k);
    require(static_cast<int>(basis.size()) == view.j, ErrorCode::kInternal, "materialize: kernel rank mismatch");
  }
  SubgroupRep rep = represent_subgroup(basis);
  if (view.source == RepSource::kComplementBox) {
    // The star of the complement is an integer multiple of the primitive kernel wedge.
    const auto& ref = rep.multivector;
    auto it = w.coefficients().begin();
    require(it != w.coefficients().end(), ErrorCode::kInternal, "materialize: zero representative");
    Rational ratio = it->second / ref.coefficient(it->first);
    require(denominator(ratio) == 1, ErrorCode::kInternal, "materialize: non-integral complement multiple");
    for (auto& x : (*rep.source_basis)[0]) x *= numerator(ratio);
    rep.multivector = ref.scaled(ratio);
  }
  require(rep.multivector == w, ErrorCode::kInternal, "materialize: basis does not reproduce the representative");
  return rep;
}

// rank-j wedge criterion ------------------------------------------------------------------

namespace {

struct CheckContext {
  int k, j;
  const kernel::CPlan* plan;
  bool use128;
  kernel::AffineForm<Int128> form128;
  kernel::AffineForm<BigInt> form_big;
  Rational N;
  Rational v;
};

// Returns true on violation; fills the violation record.
template <class Int>
bool check_one(const CheckContext& ctx, const kernel::AffineForm<Int>& form, const Int* w, const int64_t* w64,
               Violation* out) {
  Int outer = kernel::max_outer(*ctx.plan, w);
  Rational outer_q;
  if constexpr (std::is_same_v<Int, Int128>) {
    outer_q = Rational(kernel::to_big(outer));
  } else {
    outer_q = Rational(outer);
  }
  if (outer_q <= ctx.N) return false;
  int arg = 0;
  Int lhs_num = form.max_norm(*ctx.plan, w, &arg);
  // outer >= 1 and v > 0 give rhs <= 1: nothing to check when lhs > 1.
  if (lhs_num > form.D) return false;
  Rational lhs;
  if constexpr (std::is_same_v<Int, Int128>) {
    lhs = Rational(kernel::to_big(lhs_num)) / Rational(kernel::to_big(form.D));
  } else {
    lhs = Rational(lhs_num) / Rational(form.D);
  }
  if (compare_with_power(lhs, outer_q, ctx.v) > 0) return false;
  if (out) {
    *out = make_violation(ctx.k, ctx.j, w64, zero_set(ctx.k, ctx.j, *ctx.plan, arg), lhs, outer_q, ctx.v);
  }
  return true;
}

}  // namespace

CriterionReport check_4_3_iii(const SubspaceSpec& spec, const CriterionParams& params) {
  require_spec(spec);
  const int n = spec.n, k = n + 1, j = params.j;
  require(j >= 1 && j <= n, ErrorCode::kInvalidArgument, "check_4_3_iii: j must be in [1, n]");
  require(params.v > 0, ErrorCode::kInvalidArgument, "check_4_3_iii: v must be positive");
  require(params.N >= 0, ErrorCode::kInvalidArgument, "check_4_3_iii: N must be nonnegative");

  CriterionReport report;
  report.criterion = "wedge";
  report.params = {{"n", n}, {"s", spec.s}, {"j", j}, {"v", to_string(params.v)}};
  report.params["threshold"] = to_string(Rational(n + 1 - j, j));
  report.params["v_above_threshold"] = params.v > Rational(n + 1 - j, j);
  report.cutoffs = {{"N", to_string(params.N)}, {"coeff_bound", params.coeff_bound}};
  report.search_space = {{"source", to_string(params.source)}, {"injected", params.injected.size()}};

  CheckContext ctx;
  ctx.k = k;
  ctx.j = j;
  ctx.plan = &kernel::c_plan(k, j);
  ctx.N = params.N;
  ctx.v = params.v;
  const int tuple_grade = params.source == RepSource::kComplementBox ? k - j : j;
  const int64_t max_coeff = max_abs_coefficient(k, tuple_grade, params.coeff_bound);
  ctx.use128 = kernel::make_affine_form_128(n, spec.s, spec.A, max_coeff, &ctx.form128);
  ctx.form_big = kernel::make_affine_form_big(n, spec.s, spec.A);

  std::mutex mu;
  EnumerateOptions options;
  options.source = params.source;
  options.dedup = params.workers <= 1;
  options.workers = params.workers;
  const int size = kernel::subset_table(k, j).size();
  uint64_t count = for_each_rep(k, j, params.coeff_bound, options,
                                [&](int, const int64_t* coeffs, const int64_t*, int) {
                                  Violation viol;
                                  bool bad;
                                  if (ctx.use128) {
                                    std::vector<Int128> w(coeffs, coeffs + size);
                                    bad = check_one<Int128>(ctx, ctx.form128, w.data(), coeffs, &viol);
                                  } else {
                                    std::vector<BigInt> w(coeffs, coeffs + size);
                                    bad = check_one<BigInt>(ctx, ctx.form_big, w.data(), coeffs, &viol);
                                  }
                                  if (bad) {
                                    std::lock_guard<std::mutex> lock(mu);
                                    report.add_violation(std::move(viol));
                                  }
                                  return true;
                                });
  report.examined = count;

  for (const auto& rep : params.injected) {
    const MultiVector& mv = rep.multivector;
    require(mv.ambient_n() == n && mv.grade() == j, ErrorCode::kDimensionMismatch, "injected rep: wrong shape");
    require(mv.is_integral(), ErrorCode::kInvalidArgument, "injected rep must be integral");
    RationalVector dense = mv.dense();
    std::vector<BigInt> w;
    for (const auto& c : dense) w.push_back(numerator(c));
    BigInt outer = kernel::max_outer(*ctx.plan, w.data());
    ++report.examined;
    if (Rational(outer) <= ctx.N) continue;
    int arg = 0;
    BigInt lhs_num = ctx.form_big.max_norm(*ctx.plan, w.data(), &arg);
    Rational lhs = Rational(lhs_num) / Rational(ctx.form_big.D);
    if (lhs > 1 || compare_with_power(lhs, Rational(outer), ctx.v) > 0) continue;
    Violation viol;
    viol.grade = j;
    viol.w_coeffs = dense;
    viol.I = zero_set(k, j, *ctx.plan, arg);
    viol.lhs = lhs;
    viol.rhs = Magnitude::power(Rational(outer), -ctx.v);
    viol.note = "injected; max_{0 notin I}|w_I| = " + to_string(outer);
    report.add_violation(std::move(viol));
  }
  std::sort(report.violations.begin(), report.violations.end(),
            [](const Violation& a, const Violation& b) { return a.w_coeffs < b.w_coeffs; });
  return report;
}

// Witness searches -----------------------------------------------------------

namespace {

template <class Int>
std::vector<IntVector> witness_qs(const std::vector<std::vector<Int>>& Nm, const Int& D, int cols, long Q,
                                  const Rational& v, ApproxMode mode, size_t max_count) {
  const int m = static_cast<int>(Nm.size());
  const double vd = v.convert_to<double>();
  const double logD = log_of(D);
  std::vector<IntVector> out;
  std::vector<long> q(cols, -Q);
  while (true) {
    bool admissible = false;
    for (long x : q) {
      if (x != 0) {
        admissible = x > 0;
        break;
      }
    }
    if (admissible) {
      Int quality = 0;
      for (int i = 0; i < m; ++i) {
        Int acc = 0;
        for (int c = 0; c < cols; ++c) {
          if (q[c] != 0) acc += Nm[i][c] * Int(q[c]);
        }
        Int rem = acc % D;
        if (rem < 0) rem += D;
        Int dist = rem < D - rem ? rem : Int(D - rem);
        if (dist > quality) quality = dist;
      }
      double log_size = 0;
      if (mode == ApproxMode::kStandard) {
        long s = 0;
        for (long x : q) s = std::max(s, std::labs(x));
        log_size = std::log(static_cast<double>(s));
      } else {
        for (long x : q) log_size += std::log(static_cast<double>(std::max(std::labs(x), 1L)));
      }
      // quality / D <= size^{-v}, with a generous float guard before the exact check
      if (quality == 0 || log_of(quality) - logD <= -vd * log_size + 1e-6) {
        out.emplace_back(q.begin(), q.end());
        if (out.size() >= max_count) break;
      }
    }
    int i = cols - 1;
    while (i >= 0 && q[i] == Q) q[i--] = -Q;
    if (i < 0) break;
    ++q[i];
  }
  return out;
}

CriterionReport witness_report(const std::string& name, const RationalMatrix& A, long Q, const Rational& v,
                               const std::vector<IntVector>& injected_q, long N) {
  CriterionReport report;
  report.criterion = name;
  report.params = {{"v", to_string(v)}, {"rows", A.size()}, {"cols", A[0].size()}};
  report.cutoffs = {{"Q", Q}, {"N", N}};
  report.search_space = {{"q_box", "1 <= ||q|| <= Q, one of each ±q"}, {"injected", injected_q.size()}};
  std::vector<ApproxWitness> ws = witnesses_at(A, Q, v, ApproxMode::kStandard);
  long double box = std::pow(2.0L * Q + 1, static_cast<long double>(A[0].size()));
  report.examined = static_cast<uint64_t>((box - 1) / 2);
  for (const auto& q : injected_q) {
    ApproxWitness w = evaluate_witness(A, q, ApproxMode::kStandard);
    w.injected = true;
    ++report.examined;
    if (w.quality == 0 || le_power(w.quality, w.size, v)) ws.push_back(w);
  }
  for (const auto& w : ws) {
    const bool counts = w.quality == 0 || w.size > N;
    if (!counts) continue;
    Violation viol;
    viol.grade = 1;
    for (const auto& x : w.p) viol.w_coeffs.emplace_back(x);
    for (const auto& x : w.q) viol.w_coeffs.emplace_back(x);
    viol.lhs = w.quality;
    viol.rhs = Magnitude::power(w.size, -v);
    viol.note = std::string(w.injected ? "injected " : "") + "witness (p, q), ||q|| = " + to_string(w.size);
    if (w.quality == 0) viol.note += "; exact zero: (kp, kq) are witnesses for every k";
    report.add_violation(std::move(viol));
  }
  return report;
}

}  // namespace

std::vector<ApproxWitness> witnesses_at(const RationalMatrix& A, long Q, const Rational& v, ApproxMode mode,
                                        size_t max_count) {
  require(!A.empty() && !A[0].empty(), ErrorCode::kInvalidArgument, "witnesses_at: empty matrix");
  require(Q >= 1, ErrorCode::kInvalidArgument, "witnesses_at: Q must be >= 1");
  const int m = static_cast<int>(A.size()), cols = static_cast<int>(A[0].size());
  long double box = std::pow(2.0L * Q + 1, cols);
  require(box < 4e9L, ErrorCode::kInvalidArgument, "witnesses_at: enumeration box too large");
  BigInt D = 1;
  for (const auto& row : A) {
    require(static_cast<int>(row.size()) == cols, ErrorCode::kDimensionMismatch, "witnesses_at: ragged matrix");
    for (const auto& a : row) D = lcm_of(D, denominator(a));
  }
  std::vector<std::vector<BigInt>> Nm(m, std::vector<BigInt>(cols));
  BigInt maxN = 0;
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < cols; ++c) {
      Nm[i][c] = numerator(A[i][c]) * (D / denominator(A[i][c]));
      maxN = std::max(maxN, BigInt(abs(Nm[i][c])));
    }
  }
  std::vector<IntVector> qs;
  if (maxN * BigInt(Q) * BigInt(cols) + D < BigInt(1) << 62) {
    std::vector<std::vector<int64_t>> N64(m, std::vector<int64_t>(cols));
    for (int i = 0; i < m; ++i) {
      for (int c = 0; c < cols; ++c) N64[i][c] = Nm[i][c].convert_to<int64_t>();
    }
    qs = witness_qs<int64_t>(N64, D.convert_to<int64_t>(), cols, Q, v, mode, max_count);
  } else {
    qs = witness_qs<BigInt>(Nm, D, cols, Q, v, mode, max_count);
  }
  std::vector<ApproxWitness> out;
  for (const auto& q : qs) {
    ApproxWitness w = evaluate_witness(A, q, mode);
    if (w.quality == 0 || le_power(w.quality, w.size, v)) out.push_back(std::move(w));
  }
  return out;
}

CriterionReport check_j1_reduction(const SubspaceSpec& spec, const Rational& v, long Q, long N) {
  require_spec(spec);
  require(v > spec.n, ErrorCode::kInvalidArgument, "check_j1_reduction: v must exceed n");
  CriterionReport report = witness_report("j1-reduction", spec.A, Q, v, {}, N);
  report.params["n"] = spec.n;
  report.params["s"] = spec.s;

  Rational maxA = 0;
  for (const auto& row : spec.A) {
    for (const auto& a : row) maxA = std::max(maxA, Rational(abs(a)));
  }
  const Rational C_A = 1 + Rational(std::max(spec.s + 1, spec.n - spec.s)) * maxA;
  report.params["C_A"] = to_string(C_A);

  // simultaneous at v  =>  linear-form at v - δ_q  with  δ_q = v log C_A / log ||q||.
  // linear-form at v  =>  simultaneous at v, on the same (p, q).
  uint64_t forward_ok = 0, forward_failed = 0, backward_ok = 0, backward_failed = 0, skipped = 0;
  const double logC = std::log(C_A.convert_to<double>());
  std::vector<ApproxWitness> ws = witnesses_at(spec.A, Q, v, ApproxMode::kStandard);
  for (const auto& w : ws) {
    Rational outer = w.size;
    for (int i = 1; i <= spec.s; ++i) outer = std::max(outer, Rational(abs(w.p[i])));
    if (w.size <= 1) {
      ++skipped;
      continue;
    }
    const double delta = v.convert_to<double>() * logC / std::log(w.size.convert_to<double>());
    const double v_shift = v.convert_to<double>() - delta;
    Rational v_prime = Rational(static_cast<long long>(std::floor(v_shift * (1 << 20))), 1 << 20);
    if (v_prime <= 0 || w.quality == 0 || le_power(w.quality, outer, v_prime)) {
      ++forward_ok;
    } else {
      ++forward_failed;
    }
    // linear-form inequality at v on (p, q); the simultaneous claim follows since ||q|| <= outer.
    if (w.quality == 0 || le_power(w.quality, outer, v)) {
      if (w.quality == 0 || le_power(w.quality, w.size, v)) {
        ++backward_ok;
      } else {
        ++backward_failed;
      }
    }
  }
  report.params["cross_check"] = {{"forward_ok", forward_ok},
                                  {"forward_failed", forward_failed},
                                  {"backward_ok", backward_ok},
                                  {"backward_failed", backward_failed},
                                  {"unit_q_skipped", skipped}};
  return report;
}

CriterionReport hyperplane_extremal_evidence(const RationalVector& a, long Q, const Rational& v,
                                             const std::vector<IntVector>& injected_q, long N) {
  require(a.size() >= 2, ErrorCode::kInvalidArgument, "hyperplane: a must have length n >= 2");
  require(v > static_cast<long>(a.size()), ErrorCode::kInvalidArgument, "hyperplane: v must exceed n");
  RationalMatrix A;
  for (const auto& x : a) A.push_back({x});
  CriterionReport r = witness_report("hyperplane-extremal", A, Q, v, injected_q, N);
  r.params["n"] = a.size();
  return r;
}

CriterionReport line_origin_extremal_evidence(const RationalVector& b, long Q, const Rational& v,
                                              const std::vector<IntVector>& injected_q, long N) {
  require(!b.empty(), ErrorCode::kInvalidArgument, "line: b must have length n-1 >= 1");
  const long n = static_cast<long>(b.size()) + 1;
  require(v > n, ErrorCode::kInvalidArgument, "line: v must exceed n");
  RationalMatrix A{b};
  CriterionReport r = witness_report("line-extremal", A, Q, v, injected_q, N);
  r.params["n"] = n;
  return r;
}

// multiplicative hyperplane criterion ------------------------------------------------------------------

CriterionReport check_5_6_iii(const RationalVector& a, long Q, const Rational& v, long K,
                              const std::vector<BigInt>& injected_q) {
  const int n = static_cast<int>(a.size());
  require(n >= 2, ErrorCode::kInvalidArgument, "check_5_6_iii: a must have length n >= 2");
  require(v > n, ErrorCode::kInvalidArgument, "check_5_6_iii: v must exceed n");
  require(K >= 1, ErrorCode::kInvalidArgument, "check_5_6_iii: K must be >= 1");
  require(Q >= 1, ErrorCode::kInvalidArgument, "check_5_6_iii: Q must be >= 1");
  CriterionReport report;
  report.criterion = "multiplicative-hyperplane";
  report.params = {{"n", n}, {"v", to_string(v)}};
  report.cutoffs = {{"Q", Q}, {"K", K}};
  report.search_space = {{"box", "max(||p'||, |q|) <= Q, q >= 1, |p_i + a_i q| <= 1"},
                         {"injected", injected_q.size()}};
  const Rational exponent = v / n;
  const double ed = exponent.convert_to<double>();

  auto examine = [&](const BigInt& q, bool injected) {
    Rational q_r(q);
    BigInt p0 = round_half_even(-a[0] * q_r);
    Rational base_lhs = abs(a[0] * q_r + Rational(p0));
    // candidate lists for p_1..p_{n-1}
    std::vector<std::vector<BigInt>> cand(n - 1);
    for (int i = 1; i < n; ++i) {
      Rational target = -a[i] * q_r;
      BigInt lo = ceil_of(target - 1), hi = floor_of(target + 1);
      for (BigInt p = lo; p <= hi; ++p) {
        if (!injected && abs(p) > Q) continue;
        cand[i - 1].push_back(p);
      }
      if (cand[i - 1].empty()) return;
    }
    std::vector<size_t> pick(n - 1, 0);
    while (true) {
      ++report.examined;
      Rational lhs = base_lhs;
      BigInt prod = std::max(BigInt(abs(q)), BigInt(1));
      BigInt outer = abs(q);
      for (int i = 1; i < n; ++i) {
        const BigInt& p = cand[i - 1][pick[i - 1]];
        lhs = std::max(lhs, Rational(abs(a[i] * q_r + Rational(p))));
        prod *= std::max(BigInt(abs(p)), BigInt(1));
        outer = std::max(outer, BigInt(abs(p)));
      }
      if (outer > K && lhs <= 1) {
        bool maybe = lhs == 0;
        if (!maybe) {
          double l = std::log(lhs.convert_to<double>());
          if (!std::isfinite(l)) l = log_abs(lhs);
          maybe = l <= -ed * log_of(prod) + 1e-6;
        }
        if (maybe && compare_with_power(lhs, Rational(prod), exponent) <= 0) {
          Violation viol;
          viol.grade = 1;
          viol.w_coeffs.emplace_back(p0);
          for (int i = 1; i < n; ++i) viol.w_coeffs.emplace_back(cand[i - 1][pick[i - 1]]);
          viol.w_coeffs.emplace_back(q);
          viol.lhs = lhs;
          viol.rhs = Magnitude::power(Rational(prod), -exponent);
          std::string note = std::string(injected ? "injected; " : "") + "(p, q) with Pi_+(p', q) = " + to_string(prod);
          // transfer to the sup-norm form at an exponent v' > 0
          if (lhs == 0) {
            note += "; exact zero: transfers at every v'";
          } else if (outer >= 2) {
            double vt = -log_abs(lhs) / log_of(outer);
            Rational vp(static_cast<long long>(std::floor(vt * (1 << 20) * (1 - 1e-12))), 1 << 20);
            bool ok = vp > 0 && le_power(lhs, Rational(outer), vp);
            note += "; transfers to ||p + aq|| <= max(||p'||,|q|)^{-v'} with v' = " + to_string(vp) +
                    (ok ? " (verified)" : " (NOT verified)");
          }
          viol.note = note;
          report.add_violation(std::move(viol));
        }
      }
      int i = n - 2;
      while (i >= 0 && pick[i] + 1 == cand[i].size()) pick[i--] = 0;
      if (i < 0) break;
      ++pick[i];
    }
  };
  for (long q = 1; q <= Q; ++q) examine(BigInt(q), false);
  for (const auto& q : injected_q) examine(abs(q), true);
  return report;
}

nlohmann::json StrongVerdict::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["strong_threshold"] = threshold;
  j["extremal_threshold"] = extremal_threshold;
  j["omega_hat"] = std::isfinite(omega_hat) ? nlohmann::json(omega_hat) : nlohmann::json("inf");
  j["strongly_extremal_evidence"] = strongly_extremal_evidence;
  j["extremal_evidence"] = extremal_evidence;
  j["cutoff_Q"] = estimate.cutoff_Q;
  return j;
}

StrongVerdict strong_hyperplane_verdict(const RationalVector& a, long Q, const std::vector<IntVector>& injected_q) {
  const int n = static_cast<int>(a.size());
  require(n >= 2, ErrorCode::kInvalidArgument, "strong verdict: a must have length n >= 2");
  StrongVerdict out;
  for (int i = 1; i < n; ++i) {
    if (a[i] != 0) ++out.k;
  }
  out.threshold = out.k + 1;
  out.extremal_threshold = n;
  RationalMatrix A;
  for (const auto& x : a) A.push_back({x});
  out.estimate = exponent_estimate(A, {Q}, ApproxMode::kStandard, injected_q);
  out.omega_hat = out.estimate.omega_hat;
  out.strongly_extremal_evidence = out.omega_hat <= out.threshold;
  out.extremal_evidence = out.omega_hat <= out.extremal_threshold;
  return out;
}

// multiplicative flow criterion ------------------------------------------------------------------

CriterionReport check_5_5_iv(const SubspaceSpec& spec, const std::vector<GridPoint>& grid, const FlowGridParams& params) {
  require_spec(spec);
  const int n = spec.n, k = n + 1;
  require(params.base > 1, ErrorCode::kInvalidArgument, "check_5_5_iv: base must exceed 1");
  require(params.beta > 0, ErrorCode::kInvalidArgument, "check_5_5_iv: beta must be positive");
  for (const auto& g : grid) {
    require(static_cast<int>(g.t.size()) == n, ErrorCode::kDimensionMismatch, "check_5_5_iv: t-vector length != n");
    for (const auto& x : g.t) require(x >= 0, ErrorCode::kInvalidArgument, "check_5_5_iv: t_i must be nonnegative");
  }
  std::vector<int> grades = params.grades;
  if (grades.empty()) {
    for (int j = 1; j <= n; ++j) grades.push_back(j);
  }
  CriterionReport report;
  report.criterion = "multiplicative-flow";
  report.params = {{"n", n}, {"s", spec.s}, {"beta", to_string(params.beta)}, {"base", to_string(params.base)}};
  report.cutoffs = {{"T", to_string(params.T)}, {"coeff_bound", params.coeff_bound}, {"grid_points", grid.size()}};
  report.search_space = {{"grades", grades}, {"injected", params.injected.size()}, {"t_units", "log(base)"}};
  const kernel::AffineForm<BigInt> form = kernel::make_affine_form_big(n, spec.s, spec.A);
  const double logb = std::log(params.base.convert_to<double>());

  auto t_of = [&](const RationalVector& t, uint32_t mask) {
    Rational s = 0;
    for (int i = 1; i <= n; ++i) {
      if ((mask >> i) & 1u) s += t[i - 1];
    }
    return s;
  };

  // term X * base^e against base^{-beta t}: true when X * base^e < base^{-beta t}
  auto below = [&](const Rational& X, const Rational& e, const Rational& t_total) {
    if (X == 0) return true;
    double margin = log_abs(X) + (e + params.beta * t_total).convert_to<double>() * logb;
    if (margin > 1e-6) return false;
    if (margin < -1e-6) return true;
    return compare_with_power(X, params.base, params.beta * t_total + e) < 0;
  };

  auto check_rep = [&](int j, const std::vector<BigInt>& w) {
    const kernel::CPlan& plan = kernel::c_plan(k, j);
    const auto& table = kernel::subset_table(k, j);
    for (const auto& g : grid) {
      Rational t_total = 0;
      for (const auto& x : g.t) t_total += x;
      if (t_total < params.T) continue;
      ++report.examined;
      bool all_below = true;
      for (size_t z = 0; z < plan.zero_sets.size() && all_below; ++z) {
        uint32_t mask = table.masks[plan.zero_sets[z]];
        Rational X = Rational(form.norm_at(plan, static_cast<int>(z), w.data())) / Rational(form.D);
        all_below = below(X, t_total - t_of(g.t, mask), t_total);
      }
      for (size_t z = 0; z < plan.nonzero_sets.size() && all_below; ++z) {
        int idx = plan.nonzero_sets[z];
        all_below = below(Rational(abs(w[idx])), -t_of(g.t, table.masks[idx]), t_total);
      }
      if (!all_below) continue;
      Violation viol;
      viol.grade = j;
      for (const auto& x : w) viol.w_coeffs.emplace_back(x);
      viol.lhs = 0;
      viol.rhs = Magnitude::power(params.base, -params.beta * t_total);
      std::string ts;
      for (const auto& x : g.t) ts += (ts.empty() ? "" : ",") + to_string(x);
      viol.note = "every term below base^{-beta t} at t = (" + ts + ") [log(base) units]";
      report.add_violation(std::move(viol));
    }
  };

  for (int j : grades) {
    require(j >= 1 && j <= n, ErrorCode::kInvalidArgument, "check_5_5_iv: grade out of range");
    const int size = kernel::subset_table(k, j).size();
    EnumerateOptions options;
    for_each_rep(k, j, params.coeff_bound, options, [&](int, const int64_t* coeffs, const int64_t*, int) {
      check_rep(j, std::vector<BigInt>(coeffs, coeffs + size));
      return true;
    });
  }
  for (const auto& rep : params.injected) {
    const MultiVector& mv = rep.multivector;
    require(mv.ambient_n() == n, ErrorCode::kDimensionMismatch, "injected rep: ambient mismatch");
    require(mv.is_integral(), ErrorCode::kInvalidArgument, "injected rep must be integral");
    std::vector<BigInt> w;
    for (const auto& c : mv.dense()) w.push_back(numerator(c));
    check_rep(mv.grade(), w);
  }
  return report;
}

// Suites ---------------------------------------------------------------------

SuiteResult lemma_suite(int n, int s, int j, int coeff_bound, RepSource source, const std::vector<RationalMatrix>& matrices,
                        int workers) {
  const int k = n + 1;
  const int tuple_grade = source == RepSource::kComplementBox ? k - j : j;
  const int64_t max_coeff = max_abs_coefficient(k, tuple_grade, coeff_bound);
  std::vector<kernel::AffineForm<Int128>> forms(matrices.size());
  for (size_t i = 0; i < matrices.size(); ++i) {
    SubspaceSpec{n, s, matrices[i]}.validate();
    require(kernel::make_affine_form_128(n, s, matrices[i], max_coeff, &forms[i]), ErrorCode::kInvalidArgument,
            "lemma_suite: matrix entries too large for the integer kernel");
  }
  const kernel::CPlan& plan = kernel::c_plan(k, j);
  const int size = kernel::subset_table(k, j).size();
  workers = std::max(1, workers);
  std::vector<SuiteResult> per(workers);
  EnumerateOptions options;
  options.source = source;
  options.dedup = false;
  options.workers = workers;
  for_each_rep(k, j, coeff_bound, options, [&](int worker, const int64_t* coeffs, const int64_t*, int) {
    SuiteResult& r = per[worker];
    ++r.reps;
    Int128 w[64];
    for (int i = 0; i < size; ++i) w[i] = coeffs[i];
    for (size_t a = 0; a < forms.size(); ++a) {
      ++r.checks;
      if (forms[a].max_at_least(plan, w, forms[a].D)) continue;
      ++r.violations;
      if (r.first_violations.size() < 8) {
        std::ostringstream os;
        os << "A#" << a << " w=" << multivector_from_dense(k, j, coeffs).to_string();
        r.first_violations.push_back(os.str());
      }
    }
    return true;
  });
  SuiteResult total;
  for (auto& r : per) {
    total.reps += r.reps;
    total.checks += r.checks;
    total.violations += r.violations;
    for (auto& v : r.first_violations) {
      if (total.first_violations.size() < 8) total.first_violations.push_back(std::move(v));
    }
  }
  return total;
}

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RationalMatrix random_rational_matrix(int rows, int cols, uint64_t& state) {
  RationalMatrix A(rows, RationalVector(cols));
  for (auto& row : A) {
    for (auto& x : row) {
      long den = 1 + static_cast<long>(splitmix64(state) % 64);
      long span = 8 * den;
      long num = static_cast<long>(splitmix64(state) % static_cast<uint64_t>(2 * span + 1)) - span;
      x = Rational(num, den);
    }
  }
  return A;
}

}  // namespace extremal
