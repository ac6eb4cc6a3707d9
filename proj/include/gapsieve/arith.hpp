#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gapsieve {

using Gap = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Small-number helpers used by the cycle machinery. Trial division only;
// the segmented sieve in prime_sieve.hpp is kept separate so it can act as an
// independent oracle.
bool is_prime(std::uint64_t n);
std::uint64_t next_prime_after(std::uint64_t n);
std::uint64_t prev_prime_before(std::uint64_t n);  // 0 when n <= 2
std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi);  // lo <= p <= hi

/// Distinct prime factors, ascending.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
std::uint64_t totient(std::uint64_t n);

/// p# (product of primes <= p); throws OverflowError past 2^64.
std::uint64_t primorial(std::uint64_t p);

/// Largest prime p with p# == n, or 0 if n is not a primorial.
std::uint64_t primorial_stage(std::uint64_t n);

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what);
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what);

/// "num/den" (or "num" when den == 1).
std::string fraction_string(const Rational& r);

/// Decimal with `digits` significant digits.
std::string decimal_string(const Rational& r, int digits = 12);

long double to_long_double(const Rational& r);

}  // namespace gapsieve
