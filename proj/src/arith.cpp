#include "gapsieve/arith.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "gapsieve/errors.hpp"

namespace gapsieve {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::uint64_t d = 5; d <= n / d; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

std::uint64_t next_prime_after(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

std::uint64_t prev_prime_before(std::uint64_t n) {
  if (n <= 2) return 0;
  std::uint64_t c = n - 1;
  while (c >= 2 && !is_prime(c)) --c;
  return c;
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = lo < 2 ? 2 : lo; c <= hi; ++c) {
    if (is_prime(c)) out.push_back(c);
  }
  return out;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d <= n / d; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t totient(std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t t = n;
  for (auto p : prime_factors(n)) t = t / p * (p - 1);
  return t;
}

std::uint64_t primorial(std::uint64_t p) {
  std::uint64_t acc = 1;
  for (std::uint64_t q = 2; q <= p; ++q) {
    if (is_prime(q)) acc = checked_mul(acc, q, "primorial");
  }
  return acc;
}

std::uint64_t primorial_stage(std::uint64_t n) {
  if (n < 2) return 0;
  std::uint64_t acc = 1;
  std::uint64_t p = 1;
  while (acc < n) {
    p = next_prime_after(p);
    if (__builtin_mul_overflow(acc, p, &acc)) return 0;
  }
  return acc == n ? p : 0;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw OverflowError(std::string(what) + ": 64-bit overflow");
  }
  return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw OverflowError(std::string(what) + ": 64-bit overflow");
  }
  return r;
}

std::string fraction_string(const Rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string decimal_string(const Rational& r, int digits) {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  Dec v = Dec(boost::multiprecision::numerator(r)) / Dec(boost::multiprecision::denominator(r));
  return v.str(digits, std::ios_base::fmtflags(0));
}

long double to_long_double(const Rational& r) {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  Dec v = Dec(boost::multiprecision::numerator(r)) / Dec(boost::multiprecision::denominator(r));
  return v.convert_to<long double>();
}

}  // namespace gapsieve
