#pragma once

#include <map>
#include <utility>
#include <vector>

#include "extremal/exterior_algebra.hpp"
#include "extremal/lattice.hpp"
#include "extremal/log_space.hpp"
#include "extremal/numeric.hpp"

namespace extremal {

enum class FlowMode { kOneParameter, kMultiParameter };

// g_t = diag(e^t, e^{-t_1}, ..., e^{-t_n}) with t = sum t_i. Times are exact
// rationals; whether they are read in natural units or in units of log(base)
// is decided by the caller of the evaluation routines.
struct FlowSpec {
  int n = 1;
  RationalVector t_vector;
  FlowMode mode = FlowMode::kOneParameter;

  static FlowSpec one_parameter(int n, const Rational& t);
  static FlowSpec multi_parameter(RationalVector t_vector);
  Rational total() const;
  void validate() const;
};

// Coefficients of a linear form in (t_1, ..., t_n).
using LinearForm = RationalVector;

// Symbolic exponent of the e_I block: t - t_I if 0 in I, else -t_I.
LinearForm flow_scale_form(int n, const IndexSet& I);
Rational flow_scale_exponents(const FlowSpec& spec, const IndexSet& I);

// value * exp(<log_scale, t>)
struct FlowedCoefficient {
  Rational value;
  LinearForm log_scale;
};

struct FlowedMultiVector {
  int ambient_n = 0;
  int grade = 0;
  std::map<IndexSet, FlowedCoefficient> coefficients;

  // Natural units: coefficient value * e^{scale}.
  std::map<IndexSet, HighReal> evaluate(const FlowSpec& spec) const;
  // Times in units of log(base): |coefficient| as an exact magnitude value * base^{scale}.
  std::map<IndexSet, Magnitude> evaluate_in_base(const FlowSpec& spec, const Rational& base) const;
};

struct FlowOptions {
  // Mutation knob for the self-test harness: flips the parity of l(I, i).
  bool flip_shuffle_parity = false;
};

FlowedMultiVector act_flow_unipotent(const FlowSpec& spec, const RationalVector& y, const MultiVector& w,
                                     const FlowOptions& options = {});

// Basis vectors u_y e_0, ..., u_y e_n as rows: e_0 and (y_i, e_i).
LatticeBasis unipotent_embed(const RationalVector& y);

// g_t u_y Z^{n+1} with e^{t} = base^{nk}, e^{-t_i} = base^{-k}: exact rational basis.
LatticeBasis flowed_lattice_exact(const RationalVector& y, const Rational& base, long k);

struct DeltaResult {
  HighReal delta;
  IntVector m;  // minimizing integer vector (p, q) with lattice vector g_t u_y m
};
// δ(g_t u_y Z^{n+1}) at natural-unit one-parameter time t.
DeltaResult flowed_delta(const RationalVector& y, const Rational& t, long search_bound = 1L << 40);

struct MinkowskiResult {
  Rational delta;
  HighReal norm_pow;  // ||Γ||^{1/j}
  HighReal ratio;
};
MinkowskiResult minkowski_check(const SubgroupRep& rep, const std::vector<IntVector>& basis_of_gamma,
                                long search_bound = 1L << 20);

struct GrowthEstimate {
  double gamma_hat = 0;
  std::vector<int> achieving_times;
  std::vector<std::pair<int, double>> delta_log_series;  // (t, log δ)
  std::vector<double> delta_series;
  int window_start = 1;
};

// Samples integer t in [1, t_max]; gamma_hat is the max of -log δ / t over
// the tail window [ceil(t_max/2), t_max], clamped at 0.
GrowthEstimate growth_exponent_estimate(const RationalVector& y, int t_max);

}  // namespace extremal
