#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>

#include "gapsieve/dynamics.hpp"
#include "gapsieve/errors.hpp"
#include "oracles.hpp"

using namespace gapsieve;

namespace {

RatioVector rv(Gap g, std::vector<Rational> e, std::uint64_t basis = 0) { return {g, std::move(e), basis}; }

Rational binom(std::uint64_t n, std::uint64_t k) {
  Rational r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * Rational(n - k + i) / Rational(i);
  return r;
}

bool same_bits(long double a, long double b) {
  return std::memcmp(&a, &b, 10) == 0;  // x87 extended: 80 significant bits
}

}  // namespace

TEST_CASE("transfer matrix entries") {
  const auto m = build_transfer_matrix(3, 7);
  CHECK(m.m(0, 0) == 1);
  CHECK(m.m(0, 1) == Rational(1, 5));
  CHECK(m.m(1, 1) == Rational(4, 5));
  CHECK(m.m(1, 2) == Rational(2, 5));
  CHECK(m.m(2, 2) == Rational(3, 5));
  CHECK(m.m(1, 0) == 0);
  CHECK(m.m(0, 2) == 0);
  CHECK_FALSE(m.nonpositive_eigenvalue);

  CHECK(build_transfer_matrix(1, 11).m(0, 0) == 1);
  CHECK(build_transfer_matrix(4, 5).nonpositive_eigenvalue);
  CHECK_THROWS_AS(build_transfer_matrix(3, 2), DomainError);
  CHECK_THROWS_AS(eigenvalue(2, 2), DomainError);
  CHECK_THROWS_AS(build_transfer_matrix(3, 9), InvalidInput);
  CHECK(eigenvalue(1, 13) == 1);
  CHECK(eigenvalue(3, 13) == Rational(9, 11));
}

TEST_CASE("binomial eigenvectors") {
  const auto e = eigenstructure(3);
  for (std::uint32_t i = 0; i < 3; ++i) {
    for (std::uint32_t j = 0; j < 3; ++j) {
      const Rational c = j >= i ? binom(j, i) : Rational(0);
      CHECK(e.L(i, j) == c);
      CHECK(e.R(i, j) == ((i + j) % 2 == 0 ? c : -c));
    }
  }
  CHECK(e.inverse_pair());
  CHECK(e.reproduces(7));
  const auto e9 = eigenstructure(9);
  CHECK(e9.inverse_pair());
  CHECK(e9.reproduces(17));
  CHECK(e9.reproduces(5));  // holds even with negative eigenvalues
}

TEST_CASE("worked evolution of w_6") {
  const auto w6 = rv(6, {Rational(2, 3), Rational(4, 3), 0}, 30);
  const auto at7 = iterate_model(w6, 5, 7, 3);
  CHECK(at7.entries[0] == Rational(14, 15));
  CHECK(at7.basis_modulus == 210);
  const auto at11 = iterate_model(w6, 5, 11, 3);
  CHECK(at11.entries[0] == Rational(142, 135));
  CHECK(iterate_model_direct(w6, 5, 11, 3) == at11);
  CHECK(iterate_model(w6, 5, 5, 3).entries == w6.entries);
  CHECK_THROWS_AS(iterate_model(w6, 5, 4, 3), InvalidInput);
  CHECK_THROWS_AS(iterate_model(w6, 7, 5, 3), InvalidInput);
  CHECK_THROWS_AS(iterate_model(w6, 5, 7, 1), InvalidInput);
}

TEST_CASE("eigen route and direct route agree") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 25; ++t) {
    const std::uint32_t J = 1 + static_cast<std::uint32_t>(rng() % 7);
    std::vector<Rational> e;
    for (std::uint32_t j = 0; j < J; ++j) e.emplace_back(static_cast<long long>(rng() % 40), 1 + static_cast<long long>(rng() % 9));
    const auto w = rv(2 * (1 + static_cast<Gap>(rng() % 20)), e);
    const std::uint64_t p0s[] = {5, 7, 11, 13};
    const std::uint64_t p0 = p0s[rng() % 4];
    const std::uint64_t pk = next_prime_after(p0 + rng() % 40);
    REQUIRE(iterate_model(w, p0, pk, J + 1) == iterate_model_direct(w, p0, pk, J + 1));
  }
}

TEST_CASE("asymptotic ratios") {
  CHECK(asymptotic_ratio(rv(6, {Rational(2, 3), Rational(4, 3), 0})) == 2);
  CHECK(asymptotic_ratio(rv(8, {0, Rational(2, 3), Rational(1, 3)})) == 1);
  CHECK(asymptotic_ratio(rv(10, {0, Rational(2, 3), Rational(2, 3)})) == Rational(4, 3));
}

TEST_CASE("eigenvalue products, exact and float") {
  const auto empty = eigenvalue_products(13, 13, 4, ArithmeticMode::exact);
  CHECK(empty.primes_used == 0);
  for (const auto& e : empty.exact) CHECK(e == 1);

  const auto ex = eigenvalue_products(5, 31, 3, ArithmeticMode::exact);
  Rational a2 = 1;
  for (std::uint64_t p : {7, 11, 13, 17, 19, 23, 29, 31}) a2 *= Rational(p - 3, p - 2);
  CHECK(ex.exact[0] == a2);
  CHECK(ex.primes_used == 8);

  const auto fl = eigenvalue_products(5, 31, 3, ArithmeticMode::floating);
  CHECK(fl.primes_used == 8);
  for (std::uint32_t j = 2; j <= 3; ++j) {
    CHECK(std::fabs(fl.value(j) - ex.value(j)) < 1e-17L);
    CHECK(std::fabs(fl.from_logs[j - 2] - ex.value(j)) < 1e-17L);
  }
  CHECK_THROWS_AS(eigenvalue_products(5, 200000, 3, ArithmeticMode::exact), ResourceError);
  CHECK_THROWS_AS(eigenvalue_products(5, 200'000'000, 3, ArithmeticMode::floating), InvalidInput);
  CHECK_THROWS_AS(eigenvalue_products(9, 31, 3, ArithmeticMode::floating), InvalidInput);
  CHECK(eigenvalue_products(5, 30, 3, ArithmeticMode::exact).primes_used == 7);
}

TEST_CASE("float products against a naive product over an independent sieve") {
  const auto primes = oracle::eratosthenes(1'000'000);
  long double a2 = 1, a5 = 1;
  for (auto p : primes) {
    if (p <= 13) continue;
    a2 *= static_cast<long double>(p - 3) / static_cast<long double>(p - 2);
    a5 *= static_cast<long double>(p - 6) / static_cast<long double>(p - 2);
  }
  const auto fl = eigenvalue_products(13, 1'000'000, 5, ArithmeticMode::floating);
  CHECK(std::fabs(fl.value(2) / a2 - 1) < 1e-14L);
  CHECK(std::fabs(fl.value(5) / a5 - 1) < 1e-13L);
  CHECK(std::fabs(fl.from_logs[0] / fl.product[0] - 1) < 1e-14L);
}

TEST_CASE("products are independent of worker count and resumable") {
  ProductOptions one, four;
  four.workers = 4;
  const auto a = eigenvalue_products(13, 25'000'000, 4, ArithmeticMode::floating, one);
  const auto b = eigenvalue_products(13, 25'000'000, 4, ArithmeticMode::floating, four);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(same_bits(a.product[i], b.product[i]));
    CHECK(same_bits(a.from_logs[i], b.from_logs[i]));
  }

  const auto path = (std::filesystem::temp_directory_path() / "gapsieve_ckpt_test.json").string();
  std::filesystem::remove(path);
  ProductOptions ck;
  ck.checkpoint_path = path;
  ck.checkpoint_every = 10'000'000;
  eigenvalue_products(13, 9'999'999, 4, ArithmeticMode::floating, ck);
  REQUIRE(std::filesystem::exists(path));
  ck.resume = true;
  ck.workers = 2;
  const auto r = eigenvalue_products(13, 25'000'000, 4, ArithmeticMode::floating, ck);
  CHECK(r.primes_used == a.primes_used);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(same_bits(a.product[i], r.product[i]));
    CHECK(same_bits(a.from_logs[i], r.from_logs[i]));
  }
  ck.resume = true;
  CHECK_THROWS_AS(eigenvalue_products(17, 30'000'000, 4, ArithmeticMode::floating, ck), InvalidInput);
  ck.checkpoint_every = 5'000'000;
  CHECK_THROWS_AS(eigenvalue_products(13, 30'000'000, 4, ArithmeticMode::floating, ck), InvalidInput);
  std::filesystem::remove(path);
}

TEST_CASE("evolution with supplied products matches the exact model") {
  const auto w6 = rv(6, {Rational(2, 3), Rational(4, 3), 0});
  const auto ex = eigenvalue_products(5, 11, 3, ArithmeticMode::exact);
  const auto w = evolve_with_products(w6, ex.product);
  CHECK(std::fabs(w[0] - 142.0L / 135.0L) < 1e-17L);
  const auto exact = iterate_model(w6, 5, 11, 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::fabs(w[i] - to_long_double(exact.entries[i])) < 1e-17L);
}

TEST_CASE("crossover of synthetic vectors") {
  // f_a = 1, f_b = 2 - 2x: equal at x = 1/2.
  const auto est = estimate_primorial_crossover(rv(6, {1, 0}), rv(30, {0, 2}));
  REQUIRE(est.found);
  CHECK(std::fabs(est.threshold - 0.5L) < 1e-15L);

  // With alpha_2 = 1 the variant reduces to the same problem.
  const auto var = estimate_primorial_crossover(rv(6, {1, 0}), rv(30, {0, 2}), {0.25L});
  CHECK(var.found);
  CHECK(std::fabs(var.threshold - 0.5L) < 1e-15L);

  const auto none = estimate_primorial_crossover(rv(6, {1, 2}), rv(30, {1, 2}));
  CHECK_FALSE(none.found);
  CHECK_FALSE(none.note.empty());
  CHECK_FALSE(estimate_primorial_crossover(rv(6, {1}), rv(30, {3})).found);
  CHECK_THROWS_AS(estimate_primorial_crossover(rv(6, {1, 0}), rv(30, {0, 2}), {1.5L}), InvalidInput);
}
