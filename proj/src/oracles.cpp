#include "extremal/oracles.hpp"

#include <algorithm>
#include <numeric>

namespace extremal {

namespace {

void add_term(LaurentPoly& p, const LinearForm& form, const Rational& c) {
  if (c == 0) return;
  auto it = p.find(form);
  if (it == p.end()) {
    p.emplace(form, c);
  } else {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

LaurentPoly multiply(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly out;
  for (const auto& [fa, ca] : a) {
    for (const auto& [fb, cb] : b) {
      LinearForm f(fa.size());
      for (size_t i = 0; i < f.size(); ++i) f[i] = fa[i] + fb[i];
      add_term(out, f, ca * cb);
    }
  }
  return out;
}

int permutation_sign(const std::vector<int>& p) {
  int inversions = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    for (size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] > p[j]) ++inversions;
    }
  }
  return inversions % 2 ? -1 : 1;
}

std::string describe(const LaurentPoly& p) {
  if (p.empty()) return "0";
  std::string s;
  for (const auto& [f, c] : p) {
    if (!s.empty()) s += " + ";
    s += to_string(c) + "*exp(";
    for (size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + to_string(f[i]);
    s += ")";
  }
  return s;
}

}  // namespace

std::map<IndexSet, LaurentPoly> matrix_then_wedge(const RationalVector& y, const std::vector<IntVector>& basis) {
  const int n = static_cast<int>(y.size());
  require(n >= 1, ErrorCode::kInvalidArgument, "oracle: empty y");
  require(!basis.empty(), ErrorCode::kInvalidArgument, "oracle: empty basis");
  const int j = static_cast<int>(basis.size());
  for (const auto& v : basis) {
    require(static_cast<int>(v.size()) == n + 1, ErrorCode::kDimensionMismatch, "oracle: basis vectors need length n+1");
  }
  // entries[a][i]: coordinate i of g_t u_y v_a
  std::vector<std::vector<LaurentPoly>> entries(j, std::vector<LaurentPoly>(n + 1));
  const LinearForm expand(n, Rational(1));
  for (int a = 0; a < j; ++a) {
    Rational top = Rational(basis[a][0]);
    for (int i = 1; i <= n; ++i) top += y[i - 1] * Rational(basis[a][i]);
    add_term(entries[a][0], expand, top);
    for (int i = 1; i <= n; ++i) {
      LinearForm contract(n, Rational(0));
      contract[i - 1] = -1;
      add_term(entries[a][i], contract, Rational(basis[a][i]));
    }
  }
  std::map<IndexSet, LaurentPoly> out;
  std::vector<int> perm(j);
  for (const auto& I : subsets_of_size(n, j)) {
    const auto& cols = I.members();
    LaurentPoly minor;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      LaurentPoly term;
      term.emplace(LinearForm(n, Rational(0)), Rational(permutation_sign(perm)));
      for (int a = 0; a < j && !term.empty(); ++a) term = multiply(term, entries[a][cols[perm[a]]]);
      for (const auto& [f, c] : term) add_term(minor, f, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.emplace(I, std::move(minor));
  }
  return out;
}

OracleComparison compare_flow_with_oracle(const RationalVector& y, const SubgroupRep& rep, const FlowOptions& options) {
  require(rep.source_basis.has_value(), ErrorCode::kInvalidArgument, "oracle comparison needs the source basis");
  const int n = static_cast<int>(y.size());
  auto oracle = matrix_then_wedge(y, *rep.source_basis);
  // the coefficient data do not depend on the numeric value of t
  FlowSpec spec = FlowSpec::multi_parameter(RationalVector(n, Rational(0)));
  FlowedMultiVector flowed = act_flow_unipotent(spec, y, rep.multivector, options);
  OracleComparison cmp;
  for (const auto& [I, poly] : oracle) {
    ++cmp.compared;
    LaurentPoly mine;
    auto it = flowed.coefficients.find(I);
    if (it != flowed.coefficients.end()) add_term(mine, it->second.log_scale, it->second.value);
    if (mine != poly) {
      cmp.equal = false;
      if (cmp.first_mismatch.empty()) {
        cmp.first_mismatch = "I=" + I.to_string() + ": flow " + describe(mine) + " vs oracle " + describe(poly);
      }
    }
  }
  for (const auto& [I, c] : flowed.coefficients) {
    if (!oracle.count(I)) {
      cmp.equal = false;
      if (cmp.first_mismatch.empty()) cmp.first_mismatch = "I=" + I.to_string() + " missing from oracle";
    }
  }
  return cmp;
}

}  // namespace extremal
