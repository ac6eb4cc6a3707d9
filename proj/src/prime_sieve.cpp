#include "gapsieve/prime_sieve.hpp"

#include <cmath>
#include <string>

#include "gapsieve/errors.hpp"

namespace gapsieve {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t m = i * i; m <= limit; m += i) composite[m] = true;
  }
  return out;
}

std::vector<std::uint32_t> prime_gaps_upto(std::uint64_t limit, std::uint64_t max_bytes) {
  if (limit < 3) throw InvalidInput("prime_gaps_upto: limit must be at least 3");
  // pi(x) < 1.26 x / ln x for x > 1
  const auto estimate = static_cast<std::uint64_t>(1.26L * limit / std::log(static_cast<long double>(limit))) + 16;
  if (estimate * sizeof(std::uint32_t) > max_bytes) {
    throw ResourceError("prime gaps up to " + std::to_string(limit) + " exceed the memory budget");
  }
  std::vector<std::uint32_t> gaps;
  gaps.reserve(estimate);
  std::uint64_t prev = 0;
  for_each_prime(2, limit, [&](std::uint64_t p) {
    if (prev != 0) gaps.push_back(static_cast<std::uint32_t>(p - prev));
    prev = p;
  });
  return gaps;
}

}  // namespace gapsieve
