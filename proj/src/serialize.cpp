#include "extremal/serialize.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace extremal {

std::string fraction(const Rational& q) { return to_string(q); }

std::string decimal(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string decimal(const Rational& q) {
  std::ostringstream os;
  os << std::setprecision(17) << to_real(q);
  return os.str();
}

std::string csv_header(const nlohmann::json& config, const std::vector<std::pair<std::string, std::string>>& notes,
                       const std::string& columns) {
  std::string out = "# config: " + config.dump() + "\n";
  for (const auto& [k, v] : notes) out += "# " + k + ": " + v + "\n";
  out += columns + "\n";
  return out;
}

nlohmann::json witness_json(const ApproxWitness& w) {
  nlohmann::json j;
  j["mode"] = to_string(w.mode);
  nlohmann::json q = nlohmann::json::array(), p = nlohmann::json::array();
  for (const auto& x : w.q) q.push_back(to_string(x));
  for (const auto& x : w.p) p.push_back(to_string(x));
  j["q"] = q;
  j["p"] = p;
  j["quality"] = fraction(w.quality);
  j["quality_decimal"] = decimal(w.quality);
  j["size"] = fraction(w.size);
  j["tie"] = w.tie;
  j["injected"] = w.injected;
  return j;
}

std::string witness_trail_csv(const ExponentEstimate& est, ApproxMode mode, bool header_row) {
  std::ostringstream os;
  if (header_row) {
    size_t nq = est.witness_trail.empty() ? 0 : est.witness_trail[0].q.size();
    size_t np = est.witness_trail.empty() ? 0 : est.witness_trail[0].p.size();
    os << "mode,Q_shell";
    for (size_t i = 1; i <= nq; ++i) os << ",q" << i;
    for (size_t i = 1; i <= np; ++i) os << ",p" << i;
    os << ",quality_num,quality_den,size,slope\n";
  }
  for (const auto& w : est.witness_trail) {
    os << to_string(mode) << "," << est.cutoff_Q;
    for (const auto& x : w.q) os << "," << to_string(x);
    for (const auto& x : w.p) os << "," << to_string(x);
    double slope = 0;
    if (w.quality == 0) {
      slope = std::numeric_limits<double>::infinity();
    } else if (w.size > 1) {
      slope = -log_abs(w.quality) / log_abs(w.size);
    }
    os << "," << to_string(numerator(w.quality)) << "," << to_string(denominator(w.quality)) << "," << to_string(w.size)
       << "," << decimal(slope) << "\n";
  }
  return os.str();
}

}  // namespace extremal
