#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "extremal/diophantine.hpp"
#include "extremal/numeric.hpp"

namespace extremal {

// "num/den" (or "num" for integers).
std::string fraction(const Rational& q);
// Decimal rendering with 17 significant digits.
std::string decimal(const Rational& q);
std::string decimal(double x);

// "# config: {...}" plus one "# key: value" line per note, then the column line.
std::string csv_header(const nlohmann::json& config, const std::vector<std::pair<std::string, std::string>>& notes,
                       const std::string& columns);

nlohmann::json witness_json(const ApproxWitness& w);
// mode,Q_shell,q1..qn,p1..pm,quality_num,quality_den,size,slope
std::string witness_trail_csv(const ExponentEstimate& est, ApproxMode mode, bool header_row = true);

}  // namespace extremal
