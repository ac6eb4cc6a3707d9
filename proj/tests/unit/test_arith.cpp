#include <doctest.h>

#include <numeric>

#include "gapsieve/arith.hpp"
#include "gapsieve/errors.hpp"
#include "gapsieve/prime_sieve.hpp"
#include "oracles.hpp"

using namespace gapsieve;

TEST_CASE("is_prime agrees with a plain sieve") {
  const auto primes = oracle::eratosthenes(20000);
  std::size_t k = 0;
  for (std::uint64_t n = 0; n <= 20000; ++n) {
    const bool expect = k < primes.size() && primes[k] == n;
    if (expect) ++k;
    REQUIRE(is_prime(n) == expect);
  }
  CHECK(is_prime(999'999'999'989ull));
  CHECK_FALSE(is_prime(999'999'999'991ull));
}

TEST_CASE("prime neighbours") {
  CHECK(next_prime_after(13) == 17);
  CHECK(next_prime_after(1) == 2);
  CHECK(prev_prime_before(17) == 13);
  CHECK(prev_prime_before(2) == 0);
  CHECK(primes_in(10, 30) == std::vector<std::uint64_t>{11, 13, 17, 19, 23, 29});
  CHECK(primes_in(5, 4).empty());
}

TEST_CASE("totient and factors against gcd counts") {
  for (std::uint64_t n = 1; n <= 500; ++n) {
    std::uint64_t count = 0;
    for (std::uint64_t x = 1; x <= n; ++x) count += std::gcd(x, n) == 1;
    REQUIRE(totient(n) == count);
  }
  CHECK(prime_factors(360) == std::vector<std::uint64_t>{2, 3, 5});
  CHECK(prime_factors(222) == std::vector<std::uint64_t>{2, 3, 37});
}

TEST_CASE("primorials") {
  CHECK(primorial(13) == 30030);
  CHECK(primorial(14) == 30030);
  CHECK(primorial(2) == 2);
  CHECK(primorial(47) == 614889782588491410ull);
  CHECK_THROWS_AS(primorial(53), OverflowError);
  CHECK(primorial_stage(30030) == 13);
  CHECK(primorial_stage(2) == 2);
  CHECK(primorial_stage(12) == 0);
  CHECK(primorial_stage(1) == 0);
}

TEST_CASE("checked arithmetic") {
  CHECK(checked_mul(1ull << 31, 1ull << 31, "t") == 1ull << 62);
  CHECK_THROWS_AS(checked_mul(1ull << 32, 1ull << 32, "t"), OverflowError);
  CHECK_THROWS_AS(checked_add(~0ull, 1, "t"), OverflowError);
}

TEST_CASE("rational formatting") {
  CHECK(fraction_string(Rational(8, 3)) == "8/3");
  CHECK(fraction_string(Rational(4, 2)) == "2");
  CHECK(decimal_string(Rational(36, 35), 6) == "1.02857");
  CHECK(decimal_string(Rational(1, 3)) == "0.333333333333");
  CHECK(decimal_string(Rational(2)) == "2");
}

TEST_CASE("segmented sieve matches the plain sieve across segment edges") {
  const auto primes = oracle::eratosthenes(300000);
  std::vector<std::uint64_t> got;
  for_each_prime(2, 300000, [&](std::uint64_t p) { got.push_back(p); }, 1000);
  CHECK(got == primes);

  got.clear();
  for_each_prime(1000, 1100, [&](std::uint64_t p) { got.push_back(p); }, 7);
  std::vector<std::uint64_t> expect;
  for (auto p : primes) {
    if (p >= 1000 && p <= 1100) expect.push_back(p);
  }
  CHECK(got == expect);
  CHECK(isqrt(1'000'000'000'000ull) == 1'000'000);
  CHECK(isqrt(999'999'999'999ull) == 999'999);
}
