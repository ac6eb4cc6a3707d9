#pragma once

// Brute-force reference implementations. Deliberately naive and sharing no
// code with the library beyond the value types.

#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "gapsieve/arith.hpp"

namespace oracle {

using gapsieve::Gap;

inline std::vector<Gap> cycle_by_gcd(std::uint64_t n) {
  std::vector<std::uint64_t> units;
  for (std::uint64_t x = 1; x <= n + 1; ++x) {
    if (std::gcd(x, n) == 1) units.push_back(x);
  }
  std::vector<Gap> gaps;
  for (std::size_t i = 1; i < units.size(); ++i) gaps.push_back(static_cast<Gap>(units[i] - units[i - 1]));
  return gaps;
}

inline std::uint64_t primorial(std::uint64_t p) {
  std::uint64_t n = 1;
  for (std::uint64_t q = 2; q <= p; ++q) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= q; ++d) prime = prime && q % d != 0;
    if (prime) n *= q;
  }
  return n;
}

// n_{g,j} by recomputing every window sum from scratch.
inline std::map<std::pair<Gap, std::uint32_t>, std::uint64_t> naive_census(const std::vector<Gap>& g, Gap g_max,
                                                                          std::uint32_t j_max) {
  std::map<std::pair<Gap, std::uint32_t>, std::uint64_t> out;
  const std::size_t n = g.size();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::uint32_t j = 1; j <= j_max; ++j) {
      std::uint64_t sum = 0;
      for (std::uint32_t t = 0; t < j; ++t) sum += g[(s + t) % n];
      if (sum <= g_max) ++out[{static_cast<Gap>(sum), j}];
    }
  }
  return out;
}

inline std::vector<std::uint64_t> eratosthenes(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t m = i * i; m <= limit; m += i) composite[m] = true;
  }
  return primes;
}

}  // namespace oracle
