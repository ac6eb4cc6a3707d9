#include "gapsieve/report.hpp"

#include <limits>
#include <sstream>

#include "gapsieve/polignac.hpp"

namespace gapsieve {

nlohmann::json bigint_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(v);
  }
  return v.str();
}

nlohmann::json rational_json(const Rational& r) {
  return {{"num", bigint_json(numerator(r))}, {"den", bigint_json(denominator(r))}, {"decimal", decimal_string(r)}};
}

std::string rational_csv(const Rational& r) { return fraction_string(r) + "," + decimal_string(r); }

namespace {

Gap last_row(const CensusTable& t, const CensusRowOptions& o) { return o.g_max == 0 ? t.g_max() : o.g_max; }

Rational row_sum(const CensusTable& t, Gap g) {
  return t.n2() == 0 ? Rational(0) : Rational(t.row_total(g), t.n2());
}

}  // namespace

std::string census_csv(const CensusTable& table, CensusRowOptions rows) {
  std::ostringstream out;
  out << "g";
  for (std::uint32_t j = 1; j <= table.j_max(); ++j) out << ",j" << j;
  out << ",sum_w,sum_w_decimal,w_inf,w_inf_decimal\n";
  for (Gap g = rows.g_min + rows.g_min % 2; g <= last_row(table, rows); g += 2) {
    out << g;
    for (std::uint32_t j = 1; j <= table.j_max(); ++j) out << ',' << table.count(g, j);
    out << ',' << rational_csv(row_sum(table, g)) << ',' << rational_csv(hl_asymptotic_ratio(g)) << '\n';
  }
  return out.str();
}

nlohmann::json census_json(const CensusTable& table, CensusRowOptions rows) {
  nlohmann::json j;
  j["modulus"] = table.modulus();
  j["g_max"] = table.g_max();
  j["j_max"] = table.j_max();
  j["n2"] = bigint_json(table.n2());
  j["rows"] = nlohmann::json::array();
  for (Gap g = rows.g_min + rows.g_min % 2; g <= last_row(table, rows); g += 2) {
    nlohmann::json counts = nlohmann::json::array();
    for (std::uint32_t k = 1; k <= table.j_max(); ++k) counts.push_back(bigint_json(table.count(g, k)));
    j["rows"].push_back({{"g", g},
                         {"counts", counts},
                         {"sum_w", rational_json(row_sum(table, g))},
                         {"w_inf", rational_json(hl_asymptotic_ratio(g))}});
  }
  return j;
}

}  // namespace gapsieve
