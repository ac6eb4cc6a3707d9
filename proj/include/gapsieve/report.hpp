#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapsieve/arith.hpp"
#include "gapsieve/census.hpp"

namespace gapsieve {

/// {"num": ..., "den": ..., "decimal": "..."}; integers that do not fit in
/// 64 bits are written as strings.
nlohmann::json rational_json(const Rational& r);
nlohmann::json bigint_json(const BigInt& v);

/// "num/den" followed by a 12-significant-digit decimal, comma separated.
std::string rational_csv(const Rational& r);

struct CensusRowOptions {
  Gap g_min = 2;
  Gap g_max = 0;  // 0: the table's g_max
};

/// Rows are even g, columns n_{g,1..J}, then the sum over the censused
/// lengths of n_{g,j}/N_2 and the asymptotic ratio.
std::string census_csv(const CensusTable& table, CensusRowOptions rows = {});
nlohmann::json census_json(const CensusTable& table, CensusRowOptions rows = {});

}  // namespace gapsieve
