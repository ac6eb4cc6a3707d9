#pragma once

// Classical segmented sieve of Eratosthenes over odd numbers. It shares no
// code with the cycle construction so that it can serve as an oracle for it.

#include <algorithm>
#include <cstdint>
#include <vector>

namespace gapsieve {

std::uint64_t isqrt(std::uint64_t n);

/// Primes in [2, limit] by a plain sieve; used for the base primes.
std::vector<std::uint32_t> small_primes(std::uint32_t limit);

/// Calls visit(p) for each prime lo <= p <= hi, ascending.
template <class Visitor>
void for_each_prime(std::uint64_t lo, std::uint64_t hi, Visitor&& visit, std::uint64_t segment_odds = 1u << 18) {
  if (hi < 2 || lo > hi) return;
  if (lo <= 2) {
    visit(std::uint64_t{2});
    lo = 3;
  }
  if (lo % 2 == 0) ++lo;
  if (lo > hi) return;
  const auto base = small_primes(static_cast<std::uint32_t>(isqrt(hi)));
  std::vector<std::uint8_t> composite(segment_odds);
  for (std::uint64_t start = lo; start <= hi;) {
    // Segment holds the odd numbers start, start+2, ..., up to hi.
    const std::uint64_t span = std::min<std::uint64_t>(segment_odds, (hi - start) / 2 + 1);
    std::fill(composite.begin(), composite.begin() + span, 0);
    const std::uint64_t last = start + 2 * (span - 1);
    for (std::uint32_t p32 : base) {
      const std::uint64_t p = p32;
      if (p == 2) continue;
      if (p * p > last) break;
      std::uint64_t m = std::max(p * p, (start + p - 1) / p * p);
      if (m % 2 == 0) m += p;
      for (; m <= last; m += 2 * p) composite[(m - start) / 2] = 1;
    }
    for (std::uint64_t i = 0; i < span; ++i) {
      const std::uint64_t n = start + 2 * i;
      if (!composite[i] && n > 1) visit(n);
    }
    if (last >= hi) break;
    start = last + 2;
  }
}

/// Gaps between consecutive primes <= limit. Throws ResourceError when the
/// output would exceed max_bytes.
std::vector<std::uint32_t> prime_gaps_upto(std::uint64_t limit, std::uint64_t max_bytes = 1ull << 31);

}  // namespace gapsieve
