#include "extremal/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "extremal/diophantine.hpp"
#include "extremal/extremality_criteria.hpp"
#include "extremal/good_functions.hpp"
#include "extremal/lattice_flow.hpp"
#include "extremal/measure48.hpp"
#include "extremal/numeric.hpp"
#include "extremal/selftest.hpp"
#include "extremal/serialize.hpp"

namespace extremal {

namespace {

using nlohmann::json;

const std::map<std::string, std::vector<std::string>>& command_formats() {
  static const std::map<std::string, std::vector<std::string>> formats = {
      {"exponent", {"csv", "json"}},  {"flow", {"csv", "json"}},      {"criterion", {"json"}},
      {"hyperplane", {"json"}},       {"line", {"json"}},             {"measure48", {"csv", "json"}},
      {"strong", {"json"}},           {"goodness", {"csv", "json"}},  {"lemmas", {"json"}},
      {"selftest", {"text", "json"}},
  };
  return formats;
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string::npos) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  if (v.is_array()) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) out += v[i].is_array() ? ";" : ",";
      out += scalar_text(v[i], key);
    }
    return out;
  }
  fail(ErrorCode::kInvalidArgument, "parameter '" + key + "' has an unsupported type");
}

// Reads command parameters, records the effective value of each one, and
// rejects leftovers.
class Params {
 public:
  Params(const json& p, std::string command) : p_(p), command_(std::move(command)) {
    require(p_.is_object(), ErrorCode::kInvalidArgument, "params must be a JSON object");
  }

  bool has(const std::string& key) const { return p_.contains(key) && !p_[key].is_null(); }

  std::string text(const std::string& key, const std::string& def) {
    std::string s = has(key) ? scalar_text(p_[key], key) : def;
    return record(key, s);
  }
  std::optional<std::string> maybe(const std::string& key) {
    used_.insert(key);
    if (!has(key)) return std::nullopt;
    return record(key, scalar_text(p_[key], key));
  }
  std::string required(const std::string& key) {
    auto v = maybe(key);
    require(v.has_value(), ErrorCode::kInvalidArgument, command_ + ": missing parameter '" + key + "'");
    return *v;
  }
  long integer(const std::string& key, long def) {
    const std::string s = text(key, std::to_string(def));
    return parse_long(key, s);
  }
  Rational rational(const std::string& key, const std::string& def) {
    const std::string s = text(key, def);
    try {
      return parse_rational(trim(s));
    } catch (const Error&) {
      fail(ErrorCode::kInvalidArgument, command_ + ": parameter '" + key + "' is not a rational: " + s);
    }
  }
  bool flag(const std::string& key, bool def) {
    const std::string s = text(key, def ? "true" : "false");
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(ErrorCode::kInvalidArgument, command_ + ": parameter '" + key + "' must be a boolean");
  }
  std::vector<std::string> list(const std::string& key, const std::string& def) {
    std::vector<std::string> out;
    for (const auto& t : split(text(key, def), ",")) {
      if (!trim(t).empty()) out.push_back(trim(t));
    }
    return out;
  }
  std::vector<long> integers(const std::string& key, const std::string& def) {
    std::vector<long> out;
    for (const auto& t : list(key, def)) out.push_back(parse_long(key, t));
    return out;
  }
  void note(const std::string& key, const json& value) { echo_[key] = value; }
  void finish() const {
    for (const auto& [k, v] : p_.items()) {
      require(used_.count(k) > 0, ErrorCode::kInvalidArgument, command_ + ": unknown parameter '" + k + "'");
    }
  }
  const json& echo() const { return echo_; }

 private:
  std::string record(const std::string& key, const std::string& value) {
    used_.insert(key);
    echo_[key] = value;
    return value;
  }
  long parse_long(const std::string& key, const std::string& s) const {
    size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(trim(s), &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    require(pos > 0 && pos == trim(s).size(), ErrorCode::kInvalidArgument,
            command_ + ": parameter '" + key + "' is not an integer: " + s);
    return v;
  }

  json p_;
  std::string command_;
  std::set<std::string> used_;
  json echo_ = json::object();
};

struct Context {
  json config;  // normalized; params are replaced by their effective values before output
  std::string format;
  uint64_t seed = 1;
  int workers = 1;
};

struct Liouville {
  long base = 10;
  int depth = 5;
};

std::optional<Liouville> liouville_token(const std::string& token) {
  if (token.rfind("liouville:", 0) != 0) return std::nullopt;
  auto parts = split(token, ":");
  if (parts.size() != 3) return std::nullopt;
  return Liouville{std::stol(parts[1]), std::stoi(parts[2])};
}

struct Numbers {
  std::vector<std::string> tokens;
  std::vector<TestNumber> values;
  RationalVector vector() const {
    RationalVector v;
    for (const auto& t : values) v.push_back(t.value);
    return v;
  }
  json provenance() const {
    json j = json::array();
    for (size_t i = 0; i < values.size(); ++i) {
      j.push_back({{"token", tokens[i]},
                   {"exact", values[i].exact},
                   {"error_bound", fraction(values[i].error_bound)},
                   {"provenance", values[i].provenance}});
    }
    return j;
  }
  void check(long Q, const Rational& v_max) const {
    for (const auto& t : values) check_truncation(t, Q, v_max);
  }
};

Numbers parse_numbers(const std::vector<std::string>& tokens, long digits) {
  Numbers out;
  for (const auto& t : tokens) {
    out.tokens.push_back(t);
    out.values.push_back(parse_test_number(t, digits));
  }
  return out;
}

// Rows split on ';' or newlines, entries on ',' or blanks; '#' starts a comment.
std::vector<std::vector<std::string>> matrix_tokens(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& raw : split(text, ";\n")) {
    std::string line = raw.substr(0, raw.find('#'));
    std::vector<std::string> row;
    for (const auto& t : split(line, ", \t")) {
      if (!trim(t).empty()) row.push_back(trim(t));
    }
    if (!row.empty()) rows.push_back(row);
  }
  return rows;
}

std::string render(const Context& ctx, const json& result) {
  return json{{"config", ctx.config}, {"result", result}}.dump(2) + "\n";
}

std::string omega_text(double omega) { return decimal(omega); }

// exponent ------------------------------------------------------------------

RunResult cmd_exponent(Params& P, Context& ctx) {
  const long digits = P.integer("digits", 40);
  const Rational v_max = P.rational("v_max", "3");
  const std::vector<long> Qs = P.integers("Q", "10000");
  const std::string mode_s = P.text("mode", "standard");
  const bool inject = P.flag("inject", true);
  auto kind = P.maybe("kind");
  auto A_text = P.maybe("A");
  auto y_text = P.maybe("y");
  P.finish();
  require((kind ? 1 : 0) + (A_text ? 1 : 0) + (y_text ? 1 : 0) == 1, ErrorCode::kInvalidArgument,
          "exponent: give exactly one of kind, A, y");
  require(!Qs.empty(), ErrorCode::kInvalidArgument, "exponent: empty Q schedule");
  for (size_t i = 0; i < Qs.size(); ++i) {
    require(Qs[i] >= 1 && (i == 0 || Qs[i] > Qs[i - 1]), ErrorCode::kInvalidArgument,
            "exponent: Q schedule must be increasing positive integers");
  }
  ApproxMode mode;
  if (mode_s == "standard") {
    mode = ApproxMode::kStandard;
  } else if (mode_s == "multiplicative") {
    mode = ApproxMode::kMultiplicative;
  } else {
    fail(ErrorCode::kInvalidArgument, "exponent: mode must be standard or multiplicative");
  }

  std::vector<std::vector<std::string>> rows;
  if (kind) rows = {{*kind}};
  if (y_text) rows = {split(*y_text, ",")};
  if (A_text) rows = matrix_tokens(*A_text);
  require(!rows.empty(), ErrorCode::kInvalidArgument, "exponent: empty matrix");
  RationalMatrix A;
  json prov = json::array();
  for (auto& row : rows) {
    for (auto& t : row) t = trim(t);
    require(row.size() == rows[0].size(), ErrorCode::kDimensionMismatch, "exponent: ragged matrix");
    Numbers nums = parse_numbers(row, digits);
    nums.check(Qs.back(), v_max);
    A.push_back(nums.vector());
    prov.push_back(nums.provenance());
  }
  require(mode == ApproxMode::kStandard || A.size() == 1, ErrorCode::kInvalidArgument,
          "exponent: multiplicative mode needs a single row");

  std::vector<IntVector> injected;
  if (inject && A.size() == 1) {
    const int n = static_cast<int>(rows[0].size());
    for (int c = 0; c < n; ++c) {
      if (auto L = liouville_token(rows[0][c])) {
        for (auto& q : liouville_convergents(L->base, L->depth, n, c)) injected.push_back(q);
      }
    }
  }
  ExponentEstimate est = exponent_estimate(A, Qs, mode, injected);
  P.note("tie_breaking", "round-half-even");
  ctx.config["params"] = P.echo();

  RunResult r;
  r.format = ctx.format;
  std::string by_q;
  for (const auto& [Q, w] : est.omega_by_Q) by_q += (by_q.empty() ? "" : ";") + std::to_string(Q) + "=" + omega_text(w);
  if (ctx.format == "csv") {
    std::string columns = witness_trail_csv(est, mode, true);
    const std::string header_line = columns.substr(0, columns.find('\n'));
    r.data = csv_header(ctx.config,
                        {{"omega_hat", omega_text(est.omega_hat)},
                         {"omega_by_Q", by_q},
                         {"injected", std::to_string(injected.size())},
                         {"provenance", prov.dump()}},
                        header_line) +
             columns.substr(columns.find('\n') + 1);
  } else {
    json trail = json::array();
    for (const auto& w : est.witness_trail) trail.push_back(witness_json(w));
    json by = json::array();
    for (const auto& [Q, w] : est.omega_by_Q) by.push_back({{"Q", Q}, {"omega_hat", omega_text(w)}});
    r.data = render(ctx, {{"omega_hat", omega_text(est.omega_hat)},
                          {"omega_by_Q", by},
                          {"cutoff_Q", est.cutoff_Q},
                          {"injected", injected.size()},
                          {"provenance", prov},
                          {"trail", trail}});
  }
  return r;
}

// flow ----------------------------------------------------------------------

RunResult cmd_flow(Params& P, Context& ctx) {
  const long digits = P.integer("digits", 40);
  const Numbers y = parse_numbers(P.list("y", "golden"), digits);
  const long t_max = P.integer("t_max", 20);
  P.finish();
  require(t_max >= 1 && t_max <= 400, ErrorCode::kInvalidArgument, "flow: t_max must be in [1, 400]");
  GrowthEstimate g = growth_exponent_estimate(y.vector(), static_cast<int>(t_max));
  ctx.config["params"] = P.echo();
  RunResult r;
  r.format = ctx.format;
  if (ctx.format == "csv") {
    std::ostringstream os;
    os << csv_header(ctx.config,
                     {{"gamma_hat", decimal(g.gamma_hat)},
                      {"window_start", std::to_string(g.window_start)},
                      {"provenance", y.provenance().dump()}},
                     "t,delta,log_delta");
    for (const auto& [t, ld] : g.delta_log_series) os << t << "," << decimal(std::exp(ld)) << "," << decimal(ld) << "\n";
    r.data = os.str();
  } else {
    json series = json::array();
    for (const auto& [t, ld] : g.delta_log_series) series.push_back({{"t", t}, {"log_delta", ld}});
    r.data = render(ctx, {{"gamma_hat", g.gamma_hat},
                          {"window_start", g.window_start},
                          {"achieving_times", g.achieving_times},
                          {"series", series}});
  }
  return r;
}

// criterion -----------------------------------------------------------------

RepSource parse_source(const std::string& s, int n, int j) {
  if (s == "basis") return RepSource::kBasisBox;
  if (s == "complement") return RepSource::kComplementBox;
  require(s == "auto", ErrorCode::kInvalidArgument, "source must be basis, complement or auto");
  return (n == 2 || 2 * j <= n + 1) ? RepSource::kBasisBox : RepSource::kComplementBox;
}

RunResult cmd_criterion(Params& P, Context& ctx) {
  const long n = P.integer("n", 2);
  const long s = P.integer("s", 1);
  const long j = P.integer("j", 1);
  const long bound = P.integer("bound", 3);
  const long digits = P.integer("digits", 40);
  const std::string A_text = P.required("A");
  const Rational v = P.rational("v", to_string(Rational(n) + Rational(1, 2)));
  const Rational N = P.rational("N", "0");
  const std::string source_s = P.text("source", "auto");
  const std::string check = P.text("check", "wedge");
  const long Q = P.integer("Q", 50);
  P.finish();
  require(n >= 2 && n <= 6 && s >= 1 && s < n, ErrorCode::kInvalidArgument, "criterion: need 0 < s < n <= 6");
  require(j >= 1 && j <= n, ErrorCode::kInvalidArgument, "criterion: need 1 <= j <= n");
  require(bound >= 1, ErrorCode::kInvalidArgument, "criterion: bound must be >= 1");

  SubspaceSpec spec;
  spec.n = static_cast<int>(n);
  spec.s = static_cast<int>(s);
  for (const auto& row : matrix_tokens(A_text)) spec.A.push_back(parse_numbers(row, digits).vector());
  spec.validate();

  CriterionReport report;
  if (check == "wedge") {
    CriterionParams cp;
    cp.v = v;
    cp.j = static_cast<int>(j);
    cp.N = N;
    cp.coeff_bound = static_cast<int>(bound);
    cp.source = parse_source(source_s, spec.n, cp.j);
    cp.workers = ctx.workers;
    report = check_4_3_iii(spec, cp);
  } else if (check == "j1") {
    report = check_j1_reduction(spec, v, Q, std::max<long>(1, static_cast<long>(floor_of(N))));
  } else {
    fail(ErrorCode::kInvalidArgument, "criterion: check must be wedge or j1");
  }
  ctx.config["params"] = P.echo();
  RunResult r;
  r.format = ctx.format;
  r.exit_code = report.verdict == Verdict::kViolated ? kExitViolation : kExitOk;
  r.data = render(ctx, report.to_json());
  return r;
}

// hyperplane / line / strong --------------------------------------------------

std::vector<IntVector> injected_column(const std::vector<std::string>& tokens) {
  // hyperplane: A is the column a, q is scalar; only a_0 drives the injection
  std::vector<IntVector> out;
  if (auto L = liouville_token(tokens[0])) out = liouville_convergents(L->base, L->depth, 1, 0);
  return out;
}

RunResult cmd_hyperplane(Params& P, Context& ctx, bool line) {
  const long digits = P.integer("digits", 40);
  const std::vector<std::string> tokens = P.list(line ? "b" : "a", line ? "sqrt2" : "golden,sqrt2");
  const long Q = P.integer("Q", 1000);
  const long n = line ? static_cast<long>(tokens.size()) + 1 : static_cast<long>(tokens.size());
  const Rational v = P.rational("v", to_string(Rational(n) + Rational(1, 2)));
  const long N = P.integer("N", 1);
  const bool inject = P.flag("inject", true);
  P.finish();
  require(Q >= 1, ErrorCode::kInvalidArgument, "Q must be positive");
  Numbers nums = parse_numbers(tokens, digits);
  nums.check(Q, v);
  std::vector<IntVector> injected;
  if (inject) {
    if (line) {
      for (size_t c = 0; c < tokens.size(); ++c) {
        if (auto L = liouville_token(tokens[c])) {
          for (auto& q : liouville_convergents(L->base, L->depth, static_cast<int>(tokens.size()), static_cast<int>(c))) {
            injected.push_back(q);
          }
        }
      }
    } else {
      injected = injected_column(tokens);
    }
  }
  CriterionReport report = line ? line_origin_extremal_evidence(nums.vector(), Q, v, injected, N)
                                 : hyperplane_extremal_evidence(nums.vector(), Q, v, injected, N);
  ctx.config["params"] = P.echo();
  json result = report.to_json();
  result["provenance"] = nums.provenance();
  RunResult r;
  r.format = ctx.format;
  r.exit_code = report.verdict == Verdict::kViolated ? kExitViolation : kExitOk;
  r.data = render(ctx, result);
  return r;
}

RunResult cmd_strong(Params& P, Context& ctx) {
  const long digits = P.integer("digits", 40);
  const std::vector<std::string> tokens = P.list("a", "liouville:10:5,0,0");
  const long Q = P.integer("Q", 1000);
  const long n = static_cast<long>(tokens.size());
  const Rational v = P.rational("v", to_string(Rational(n) + Rational(1, 2)));
  const long K = P.integer("K", 1);
  const bool inject = P.flag("inject", true);
  P.finish();
  Numbers nums = parse_numbers(tokens, digits);
  nums.check(Q, v);
  const RationalVector a = nums.vector();
  std::vector<IntVector> injected = inject ? injected_column(tokens) : std::vector<IntVector>{};
  std::vector<BigInt> injected_scalar;
  for (const auto& q : injected) injected_scalar.push_back(q[0]);

  StrongVerdict verdict = strong_hyperplane_verdict(a, Q, injected);
  // the standard search stays inside the box; injected witnesses are reported separately
  CriterionReport standard = hyperplane_extremal_evidence(a, Q, v, {}, 1);
  CriterionReport standard_injected = hyperplane_extremal_evidence(a, Q, v, injected, 1);
  CriterionReport multiplicative = check_5_6_iii(a, Q, v, K, injected_scalar);
  ctx.config["params"] = P.echo();
  json result = {{"verdict", verdict.to_json()},
                 {"standard", standard.to_json()},
                 {"standard_with_injected", standard_injected.to_json()},
                 {"multiplicative", multiplicative.to_json()},
                 {"provenance", nums.provenance()}};
  RunResult r;
  r.format = ctx.format;
  r.exit_code = verdict.strongly_extremal_evidence ? kExitOk : kExitViolation;
  r.data = render(ctx, result);
  return r;
}

// measure48 -----------------------------------------------------------------

RunResult cmd_measure48(Params& P, Context& ctx) {
  const long digits = P.integer("digits", 40);
  const Numbers b = parse_numbers(P.list("b", "sqrt2"), digits);
  const Rational v = P.rational("v", "3");
  const std::vector<long> Qs = P.integers("Qs", "16,64,256,1024");
  const long samples = P.integer("samples", 100000);
  P.finish();
  require(samples >= 1, ErrorCode::kInvalidArgument, "measure48: samples must be positive");
  require(!Qs.empty(), ErrorCode::kInvalidArgument, "measure48: empty Q list");
  b.check(2 * *std::max_element(Qs.begin(), Qs.end()), v);
  ctx.config["params"] = P.echo();

  std::vector<MeasureEstimate> estimates;
  double slope = 0;
  bool slope_defined = false;
  if (Qs.size() >= 2) {
    MeasureSweep sw = measure_sweep(b.vector(), v, Qs, static_cast<uint64_t>(samples), ctx.seed, ctx.workers);
    estimates = sw.estimates;
    slope = sw.slope;
    slope_defined = sw.slope_defined;
  } else {
    estimates.push_back(measure_A_set(b.vector(), v, Qs[0], static_cast<uint64_t>(samples), ctx.seed, ctx.workers));
  }
  const double predicted = (static_cast<double>(b.values.size() + 1) - v.convert_to<double>()) / 2;
  RunResult r;
  r.format = ctx.format;
  if (ctx.format == "csv") {
    std::ostringstream os;
    os << csv_header(ctx.config,
                     {{"slope", slope_defined ? decimal(slope) : "undefined"},
                      {"predicted_exponent", decimal(predicted)},
                      {"provenance", b.provenance().dump()}},
                     "Q,samples,hits,measure_hat,measure_decimal,ci_low,ci_high");
    for (const auto& e : estimates) {
      os << e.Q << "," << e.samples << "," << e.hits << ","
         << fraction(Rational(BigInt(e.hits), BigInt(e.samples))) << "," << decimal(e.measure_hat) << ","
         << decimal(std::max(0.0, e.measure_hat - e.halfwidth)) << "," << decimal(e.measure_hat + e.halfwidth) << "\n";
    }
    r.data = os.str();
  } else {
    json rows = json::array();
    for (const auto& e : estimates) {
      rows.push_back({{"Q", e.Q},
                      {"samples", e.samples},
                      {"hits", e.hits},
                      {"measure_hat", fraction(Rational(BigInt(e.hits), BigInt(e.samples)))},
                      {"ci_low", std::max(0.0, e.measure_hat - e.halfwidth)},
                      {"ci_high", e.measure_hat + e.halfwidth}});
    }
    r.data = render(ctx, {{"estimates", rows},
                          {"slope", slope_defined ? json(slope) : json(nullptr)},
                          {"predicted_exponent", predicted}});
  }
  return r;
}

// goodness ------------------------------------------------------------------

FunctionSpec parse_function(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, ErrorCode::kInvalidArgument,
          "goodness: f must be poly:c0,c1,..., monomial:l or cantor:levels");
  const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  if (kind == "poly") {
    RationalVector c;
    for (const auto& t : split(rest, ",")) c.push_back(parse_rational(trim(t)));
    return FunctionSpec::polynomial(Polynomial(c));
  }
  if (kind == "monomial") return FunctionSpec::polynomial(Polynomial::monomial(std::stoi(rest)));
  if (kind == "cantor") return FunctionSpec::cantor_bad(std::stoi(rest));
  fail(ErrorCode::kInvalidArgument, "goodness: unknown function kind '" + kind + "'");
}

std::vector<Epsilon> parse_eps(const std::string& text) {
  if (text.rfind("log:", 0) == 0) return log_eps_grid(std::stoi(text.substr(4)));
  std::vector<Epsilon> out;
  for (const auto& t : split(text, ",")) {
    if (!trim(t).empty()) out.push_back(Epsilon::exact(parse_rational(trim(t))));
  }
  return out;
}

// "stage:k" is the left endpoint of the first removed interval of stage k.
Rational parse_point(const std::string& text, const FunctionSpec& f) {
  if (text.rfind("stage:", 0) == 0) {
    require(f.kind() == FunctionSpec::Kind::kCantorBad, ErrorCode::kInvalidArgument, "goodness: stage:k needs cantor f");
    const int stage = std::stoi(text.substr(6));
    for (const auto& r : f.cantor().removed) {
      if (r.stage == stage) return r.a;
    }
    fail(ErrorCode::kInvalidArgument, "goodness: no removed interval at stage " + std::to_string(stage));
  }
  return parse_rational(text);
}

RunResult cmd_goodness(Params& P, Context& ctx) {
  const std::string f_text = P.text("f", "monomial:3");
  const FunctionSpec f = parse_function(f_text);
  const auto x0_text = P.maybe("x0");
  RunResult r;
  r.format = ctx.format;
  if (x0_text) {
    const std::vector<std::string> alpha_tokens = P.list("alphas", "1");
    const Rational r0 = P.rational("r0", "1/256");
    const long halvings = P.integer("halvings", 4);
    const long side = P.integer("side", 1);
    const std::string eps_text = P.text("eps", "log:24");
    P.finish();
    std::vector<Rational> alphas;
    for (const auto& t : alpha_tokens) alphas.push_back(parse_rational(t));
    const Rational x0 = parse_point(*x0_text, f);
    P.note("x0_value", fraction(x0));
    NotGoodTable table =
        demonstrate_not_good(f, x0, alphas, r0, static_cast<int>(halvings), parse_eps(eps_text), static_cast<int>(side));
    ctx.config["params"] = P.echo();
    std::vector<std::pair<std::string, std::string>> notes;
    json growth = json::array();
    for (const auto& [alpha, lg] : table.log_growth) {
      const double g = lg.convert_to<double>();
      notes.push_back({"growth alpha=" + fraction(alpha), decimal(std::exp(g))});
      growth.push_back({{"alpha", fraction(alpha)}, {"log_growth", g}, {"growth", std::exp(g)}});
    }
    if (ctx.format == "csv") {
      std::ostringstream os;
      os << csv_header(ctx.config, notes, "alpha,radius,log_C_hat,C_hat");
      for (const auto& row : table.rows) {
        const double lc = row.log_C_hat.convert_to<double>();
        os << fraction(row.alpha) << "," << fraction(row.radius) << "," << decimal(lc) << "," << decimal(std::exp(lc))
           << "\n";
      }
      r.data = os.str();
    } else {
      json rows = json::array();
      for (const auto& row : table.rows) {
        rows.push_back({{"alpha", fraction(row.alpha)},
                        {"radius", fraction(row.radius)},
                        {"log_C_hat", row.log_C_hat.convert_to<double>()}});
      }
      r.data = render(ctx, {{"rows", rows}, {"growth", growth}});
    }
    return r;
  }
  const std::string default_alpha =
      f.kind() == FunctionSpec::Kind::kPolynomial && f.poly().degree() > 0 ? to_string(Rational(1, f.poly().degree()))
                                                                           : "1";
  const Rational alpha = P.rational("alpha", default_alpha);
  const std::string balls_text = P.text("balls", "-1:1");
  const std::string eps_text = P.text("eps", "log:10");
  P.finish();
  std::vector<Ball> balls;
  for (const auto& b : split(balls_text, ";")) {
    auto ends = split(b, ":");
    require(ends.size() == 2, ErrorCode::kInvalidArgument, "goodness: balls are lo:hi separated by ';'");
    balls.push_back(Ball::interval(parse_rational(trim(ends[0])), parse_rational(trim(ends[1]))));
  }
  GoodnessProfile profile = goodness_profile(f, balls, alpha, parse_eps(eps_text));
  ctx.config["params"] = P.echo();
  if (ctx.format == "csv") {
    std::string body = profile.to_csv();
    const std::string columns = body.substr(0, body.find('\n'));
    r.data = csv_header(ctx.config, {{"C_hat", decimal(profile.C_hat())}, {"function", f.describe()}}, columns) +
             body.substr(body.find('\n') + 1);
  } else {
    r.data = render(ctx, {{"C_hat", profile.C_hat()},
                          {"log_C_hat", profile.log_C_hat.convert_to<double>()},
                          {"function", f.describe()},
                          {"entries", profile.entries.size()}});
  }
  return r;
}

// lemmas / selftest -----------------------------------------------------------

RunResult cmd_lemmas(Params& P, Context& ctx) {
  const std::string which = P.text("which", "all");
  const bool reduced = P.flag("reduced", false);
  const std::vector<long> ns = P.integers("ns", reduced ? "2,3" : "2,3,4");
  const long bound45 = P.integer("bound_rankn", reduced ? 2 : 5);
  const long bound46 = P.integer("bound_column", reduced ? 2 : 4);
  const long matrices = P.integer("matrices", reduced ? 2 : 3);
  P.finish();
  require(which == "rankn" || which == "column" || which == "all", ErrorCode::kInvalidArgument,
          "lemmas: which must be rankn, column or all");
  for (long n : ns) require(n >= 2 && n <= 4, ErrorCode::kInvalidArgument, "lemmas: n must be in {2,3,4}");
  LemmaSuitePlan p45{{}, static_cast<int>(bound45), static_cast<int>(matrices)};
  LemmaSuitePlan p46{{}, static_cast<int>(bound46), static_cast<int>(matrices)};
  for (long n : ns) {
    p45.ns.push_back(static_cast<int>(n));
    p46.ns.push_back(static_cast<int>(n));
  }
  ctx.config["params"] = P.echo();
  json suites = json::array();
  bool pass = true;
  auto add = [&](const SuiteOutcome& o) {
    pass = pass && o.pass;
    suites.push_back({{"suite", o.name}, {"pass", o.pass}, {"checks", o.checks}, {"detail", o.detail}});
  };
  if (which != "column") add(lemma45_suite(p45, ctx.seed, ctx.workers));
  if (which != "rankn") add(lemma46_suite(p46, ctx.seed, ctx.workers));
  RunResult r;
  r.format = ctx.format;
  r.exit_code = pass ? kExitOk : kExitViolation;
  r.data = render(ctx, {{"suites", suites}, {"all_pass", pass}});
  return r;
}

RunResult cmd_selftest(Params& P, Context& ctx) {
  SelftestOptions o;
  o.reduced = P.flag("reduced", false);
  const std::string mutate = P.text("mutate", "none");
  P.finish();
  require(mutate == "none" || mutate == "shuffle-sign", ErrorCode::kInvalidArgument,
          "selftest: mutate must be none or shuffle-sign");
  o.mutate_shuffle_sign = mutate == "shuffle-sign";
  o.workers = ctx.workers;
  o.seed = ctx.seed;
  SelftestReport report = run_selftest(o);
  ctx.config["params"] = P.echo();
  RunResult r;
  r.format = ctx.format;
  r.exit_code = report.all_pass() ? kExitOk : kExitError;
  r.data = ctx.format == "json" ? render(ctx, report.to_json()) : report.to_text();
  return r;
}

}  // namespace

json normalize_config(const json& config) {
  require(config.is_object(), ErrorCode::kInvalidArgument, "config must be a JSON object");
  static const std::set<std::string> allowed = {"command", "params", "seed", "format", "precision", "workers"};
  for (const auto& [k, v] : config.items()) {
    require(allowed.count(k) > 0, ErrorCode::kInvalidArgument, "config: unknown key '" + k + "'");
  }
  require(config.contains("command") && config["command"].is_string(), ErrorCode::kInvalidArgument,
          "config: 'command' must be a string");
  const std::string command = config["command"].get<std::string>();
  auto it = command_formats().find(command);
  require(it != command_formats().end(), ErrorCode::kInvalidArgument, "config: unknown command '" + command + "'");
  json out;
  out["command"] = command;
  out["params"] = config.value("params", json::object());
  require(out["params"].is_object(), ErrorCode::kInvalidArgument, "config: 'params' must be an object");
  out["seed"] = config.value("seed", json(1));
  require(out["seed"].is_number_unsigned() || (out["seed"].is_number_integer() && out["seed"].get<long long>() >= 0),
          ErrorCode::kInvalidArgument, "config: 'seed' must be a nonnegative integer");
  out["format"] = config.value("format", it->second.front());
  require(out["format"].is_string() && std::count(it->second.begin(), it->second.end(), out["format"].get<std::string>()),
          ErrorCode::kInvalidArgument, "config: unsupported format for " + command);
  out["precision"] = config.value("precision", json(real_precision_bits()));
  require(out["precision"].is_number_integer() && out["precision"].get<long long>() >= 128, ErrorCode::kInvalidArgument,
          "config: 'precision' must be an integer >= 128");
  out["workers"] = config.value("workers", json(1));
  require(out["workers"].is_number_integer() && out["workers"].get<long long>() >= 1 &&
              out["workers"].get<long long>() <= 256,
          ErrorCode::kInvalidArgument, "config: 'workers' must be in [1, 256]");
  return out;
}

RunResult run_experiment(const json& config) {
  Context ctx;
  ctx.config = normalize_config(config);
  ctx.format = ctx.config["format"].get<std::string>();
  ctx.seed = ctx.config["seed"].get<uint64_t>();
  ctx.workers = ctx.config["workers"].get<int>();
  set_real_precision_bits(ctx.config["precision"].get<unsigned>());
  const std::string command = ctx.config["command"];
  Params P(ctx.config["params"], command);
  // workers only affect speed, never the data
  ctx.config.erase("workers");
  if (command == "exponent") return cmd_exponent(P, ctx);
  if (command == "flow") return cmd_flow(P, ctx);
  if (command == "criterion") return cmd_criterion(P, ctx);
  if (command == "hyperplane") return cmd_hyperplane(P, ctx, false);
  if (command == "line") return cmd_hyperplane(P, ctx, true);
  if (command == "measure48") return cmd_measure48(P, ctx);
  if (command == "strong") return cmd_strong(P, ctx);
  if (command == "goodness") return cmd_goodness(P, ctx);
  if (command == "lemmas") return cmd_lemmas(P, ctx);
  return cmd_selftest(P, ctx);
}

std::string command_help(const std::string& command) {
  static const std::map<std::string, std::string> help = {
      {"exponent",
       "Diophantine exponent estimate over a Q schedule.\n"
       "  params: kind=<token> | A=<rows> | y=<tokens>; Q=10000 (comma schedule); mode=standard|multiplicative;\n"
       "          digits=40; v_max=3; inject=true (Liouville convergents are injected, verified exactly)\n"
       "  csv columns: mode,Q_shell,q1..qn,p1..pm,quality_num,quality_den,size,slope\n"
       "  header notes: omega_hat, omega_by_Q, injected, provenance"},
      {"flow",
       "Shortest-vector decay along g_t u_y Z^{n+1}.\n"
       "  params: y=<tokens>; t_max=20; digits=40\n"
       "  csv columns: t,delta,log_delta; header notes: gamma_hat, window_start"},
      {"criterion",
       "Rank-j criterion for the subspace parametrized by x -> (x, x~A); exit 2 on a violation.\n"
       "  params: n, s, j=1, bound=3, A=<rows>, v=n+1/2, N=0, source=auto|basis|complement,\n"
       "          check=wedge|j1, Q=50 (j1 only)\n"
       "  output: json report"},
      {"hyperplane",
       "Standard witnesses for the hyperplane x_0 = a_0 + sum a_i x_i; exit 2 on a witness.\n"
       "  params: a=<tokens>; Q=1000; v=n+1/2; N=1; inject=true; digits=40"},
      {"line",
       "Standard witnesses for the line through the origin with direction (1, b); exit 2 on a witness.\n"
       "  params: b=<tokens>; Q=1000; v=n+1/2; N=1; inject=true; digits=40"},
      {"measure48",
       "Monte-Carlo measure of A(b, v, Q) over [0,1).\n"
       "  params: b=sqrt2; v=3; Qs=16,64,256,1024; samples=100000; digits=40\n"
       "  csv columns: Q,samples,hits,measure_hat,measure_decimal,ci_low,ci_high; header notes: slope"},
      {"strong",
       "Strong-extremality verdict for a hyperplane; exit 2 when the multiplicative threshold k+1 is exceeded.\n"
       "  params: a=<tokens>; Q=1000; v=n+1/2; K=1; inject=true; digits=40\n"
       "  result: verdict; standard (box search only); standard_with_injected; multiplicative (hyperplane criterion)"},
      {"goodness",
       "(C, alpha)-goodness profile, or the not-good demonstration when x0 is given.\n"
       "  params: f=monomial:l|poly:c0,c1,..|cantor:levels; alpha=1/deg; balls=lo:hi;...; eps=log:K|e1,e2,..\n"
       "          demonstration: x0=<rational>|stage:k; alphas; r0=1/256; halvings=4; side=1; eps=log:24\n"
       "  csv columns: ball_center,radius,alpha,eps,ratio,log_ratio (profile) or alpha,radius,log_C_hat,C_hat"},
      {"lemmas",
       "Exhaustive rank-n and column-matrix suites; exit 2 on a violation.\n"
       "  params: which=rankn|column|all; reduced=false; ns=2,3,4; bound_rankn=5; bound_column=4; matrices=3"},
      {"selftest",
       "Runs all suites; exit 1 on any failure.\n  params: reduced=false; mutate=none|shuffle-sign"},
  };
  auto it = help.find(command);
  return it == help.end() ? std::string() : it->second;
}

}  // namespace extremal
