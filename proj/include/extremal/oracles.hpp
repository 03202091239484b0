#pragma once

#include <map>
#include <string>
#include <vector>

#include "extremal/exterior_algebra.hpp"
#include "extremal/lattice_flow.hpp"
#include "extremal/numeric.hpp"

namespace extremal {

// Formal sum of c * exp(<form, t>) with form a rational linear form in t_1..t_n.
using LaurentPoly = std::map<LinearForm, Rational>;

// Applies g_t u_y to every basis vector entry-wise (symbolic t), then takes all
// j x j minors by permutation expansion. Independent of the closed-form flow action.
std::map<IndexSet, LaurentPoly> matrix_then_wedge(const RationalVector& y, const std::vector<IntVector>& basis);

struct OracleComparison {
  bool equal = true;
  int compared = 0;
  std::string first_mismatch;
};

// act_flow_unipotent against matrix_then_wedge, coefficient for coefficient.
OracleComparison compare_flow_with_oracle(const RationalVector& y, const SubgroupRep& rep, const FlowOptions& options = {});

}  // namespace extremal
