#include "extremal/lattice_flow.hpp"

#include <cmath>

namespace extremal {

FlowSpec FlowSpec::one_parameter(int n, const Rational& t) {
  require(n >= 1, ErrorCode::kInvalidArgument, "flow: n must be positive");
  require(t >= 0, ErrorCode::kInvalidArgument, "flow: t must be nonnegative");
  FlowSpec spec;
  spec.n = n;
  spec.t_vector.assign(n, t / n);
  spec.mode = FlowMode::kOneParameter;
  return spec;
}

FlowSpec FlowSpec::multi_parameter(RationalVector t_vector) {
  require(!t_vector.empty(), ErrorCode::kInvalidArgument, "flow: empty t vector");
  FlowSpec spec;
  spec.n = static_cast<int>(t_vector.size());
  spec.t_vector = std::move(t_vector);
  spec.mode = FlowMode::kMultiParameter;
  spec.validate();
  return spec;
}

Rational FlowSpec::total() const {
  Rational t = 0;
  for (const auto& x : t_vector) t += x;
  return t;
}

void FlowSpec::validate() const {
  require(static_cast<int>(t_vector.size()) == n, ErrorCode::kDimensionMismatch, "flow: t vector length != n");
  for (const auto& x : t_vector) require(x >= 0, ErrorCode::kInvalidArgument, "flow: t_i must be nonnegative");
  if (mode == FlowMode::kOneParameter) {
    Rational t = total();
    for (const auto& x : t_vector) {
      require(x == t / n, ErrorCode::kInvalidArgument, "one-parameter flow requires t_i = t/n");
    }
  }
}

LinearForm flow_scale_form(int n, const IndexSet& I) {
  require(I.ambient_n() == n, ErrorCode::kDimensionMismatch, "flow_scale: ambient mismatch");
  LinearForm form(n, Rational(0));
  if (I.contains(0)) {
    // t - t_I = sum of t_i over i not in I
    for (int i = 1; i <= n; ++i) {
      if (!I.contains(i)) form[i - 1] = 1;
    }
  } else {
    for (int i : I.members()) form[i - 1] = -1;
  }
  return form;
}

Rational flow_scale_exponents(const FlowSpec& spec, const IndexSet& I) {
  spec.validate();
  LinearForm form = flow_scale_form(spec.n, I);
  Rational s = 0;
  for (int i = 0; i < spec.n; ++i) s += form[i] * spec.t_vector[i];
  return s;
}

namespace {

Rational evaluate_form(const LinearForm& form, const FlowSpec& spec) {
  Rational s = 0;
  for (int i = 0; i < spec.n; ++i) s += form[i] * spec.t_vector[i];
  return s;
}

}  // namespace

std::map<IndexSet, HighReal> FlowedMultiVector::evaluate(const FlowSpec& spec) const {
  spec.validate();
  std::map<IndexSet, HighReal> out;
  for (const auto& [I, c] : coefficients) out[I] = to_real(c.value) * exp(to_real(evaluate_form(c.log_scale, spec)));
  return out;
}

std::map<IndexSet, Magnitude> FlowedMultiVector::evaluate_in_base(const FlowSpec& spec, const Rational& base) const {
  spec.validate();
  std::map<IndexSet, Magnitude> out;
  for (const auto& [I, c] : coefficients) {
    out[I] = Magnitude{abs(c.value), PowerProduct::power(base, evaluate_form(c.log_scale, spec))};
  }
  return out;
}

FlowedMultiVector act_flow_unipotent(const FlowSpec& spec, const RationalVector& y, const MultiVector& w,
                                     const FlowOptions& options) {
  spec.validate();
  const int n = spec.n;
  require(static_cast<int>(y.size()) == n, ErrorCode::kDimensionMismatch, "act_flow: y length must be n");
  require(w.ambient_n() == n, ErrorCode::kDimensionMismatch, "act_flow: w ambient dimension must be n");
  require(w.grade() >= 1 && w.grade() <= n, ErrorCode::kInvalidArgument, "act_flow: grade must be in [1, n]");
  FlowedMultiVector out;
  out.ambient_n = n;
  out.grade = w.grade();
  for (const auto& I : subsets_of_size(n, w.grade())) {
    Rational value = w.coefficient(I);
    if (I.contains(0)) {
      for (int i = 1; i <= n; ++i) {
        if (I.contains(i)) continue;
        Rational term = w.coefficient(I.with(i).without(0)) * y[i - 1];
        int parity = shuffle_count(I, i) + (options.flip_shuffle_parity ? 1 : 0);
        value += (parity % 2) ? Rational(-term) : term;
      }
    }
    if (value != 0) out.coefficients[I] = FlowedCoefficient{value, flow_scale_form(n, I)};
  }
  return out;
}

LatticeBasis unipotent_embed(const RationalVector& y) {
  const int n = static_cast<int>(y.size());
  require(n >= 1, ErrorCode::kInvalidArgument, "unipotent_embed: empty y");
  std::vector<RationalVector> rows(n + 1, RationalVector(n + 1, Rational(0)));
  rows[0][0] = 1;
  for (int i = 1; i <= n; ++i) {
    rows[i][0] = y[i - 1];
    rows[i][i] = 1;
  }
  return LatticeBasis{n + 1, std::move(rows)};
}

LatticeBasis flowed_lattice_exact(const RationalVector& y, const Rational& base, long k) {
  LatticeBasis b = unipotent_embed(y);
  const int n = static_cast<int>(y.size());
  Rational expand = pow_int(base, static_cast<long>(n) * k);
  Rational contract = pow_int(base, -k);
  for (auto& row : b.rows) {
    row[0] *= expand;
    for (int i = 1; i <= n; ++i) row[i] *= contract;
  }
  return b;
}

DeltaResult flowed_delta(const RationalVector& y, const Rational& t, long search_bound) {
  const int n = static_cast<int>(y.size());
  LatticeBasis b = unipotent_embed(y);
  HighReal tr = to_real(t);
  std::vector<HighReal> scales(n + 1);
  scales[0] = exp(tr);
  for (int i = 1; i <= n; ++i) scales[i] = exp(-tr / n);
  ShortestVector sv = shortest_vector(b.rows, search_bound, scales);
  return DeltaResult{sv.norm_real, sv.coefficients};
}

MinkowskiResult minkowski_check(const SubgroupRep& rep, const std::vector<IntVector>& basis_of_gamma,
                                long search_bound) {
  require(rep.rank >= 1, ErrorCode::kInvalidArgument, "minkowski_check: rank must be positive");
  require(static_cast<int>(basis_of_gamma.size()) == rep.rank, ErrorCode::kDimensionMismatch,
          "minkowski_check: basis size must equal rank");
  std::vector<RationalVector> rows;
  for (const auto& v : basis_of_gamma) rows.emplace_back(v.begin(), v.end());
  ShortestVector sv = shortest_vector(rows, search_bound);
  MinkowskiResult r;
  r.delta = sv.norm;
  r.norm_pow = pow(to_real(sup_norm(rep.multivector)), HighReal(1) / rep.rank);
  r.ratio = to_real(r.delta) / r.norm_pow;
  return r;
}

GrowthEstimate growth_exponent_estimate(const RationalVector& y, int t_max) {
  require(t_max >= 1, ErrorCode::kInvalidArgument, "growth: t_max must be >= 1");
  GrowthEstimate g;
  g.window_start = std::max(1, (t_max + 1) / 2);
  double best = 0;
  for (int t = 1; t <= t_max; ++t) {
    DeltaResult d = flowed_delta(y, Rational(t));
    double log_delta = log(d.delta).convert_to<double>();
    g.delta_series.push_back(d.delta.convert_to<double>());
    g.delta_log_series.emplace_back(t, log_delta);
    if (t < g.window_start) continue;
    double rate = -log_delta / t;
    if (rate > best + 1e-12) {
      best = rate;
      g.achieving_times = {t};
    } else if (std::abs(rate - best) <= 1e-12 && rate > 0) {
      g.achieving_times.push_back(t);
    }
  }
  g.gamma_hat = std::max(0.0, best);
  return g;
}

}  // namespace extremal
