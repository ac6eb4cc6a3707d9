#include <doctest.h>

#include <numeric>

#include "gapsieve/census.hpp"
#include "gapsieve/errors.hpp"
#include "gapsieve/polignac.hpp"
#include "oracles.hpp"

using namespace gapsieve;

namespace {

// Residues a mod N with a and a+g both units.
std::uint64_t unit_pairs(std::uint64_t n, std::uint64_t g) {
  std::uint64_t c = 0;
  for (std::uint64_t a = 0; a < n; ++a) c += std::gcd(a, n) == 1 && std::gcd(a + g, n) == 1;
  return c;
}

}  // namespace

TEST_CASE("radical decomposition") {
  const auto r = radical(90);
  CHECK(r.Q == 30);
  CHECK(r.n1 == 3);
  CHECK(r.qbar == 5);
  CHECK(radical(64).degenerate());
  CHECK(radical(64).n1 == 32);
  CHECK(radical(222).primes == std::vector<std::uint64_t>{2, 3, 37});
  CHECK_THROWS_AS(radical(7), InvalidInput);
  CHECK_THROWS_AS(radical(0), InvalidInput);
}

TEST_CASE("asymptotic and partial ratio sums") {
  CHECK(hl_asymptotic_ratio(74) == Rational(36, 35));
  CHECK(hl_asymptotic_ratio(90) == Rational(8, 3));
  CHECK(hl_asymptotic_ratio(222) == Rational(72, 35));
  CHECK(hl_asymptotic_ratio(64) == 1);
  CHECK(ratio_sum_at(74, 31) == 1);
  CHECK(ratio_sum_at(90, 31) == Rational(8, 3));
  CHECK(ratio_sum_at(222, 31) == 2);
  CHECK(ratio_sum_at(222, 37) == Rational(72, 35));
  CHECK_THROWS_AS(ratio_sum_at(6, 9), InvalidInput);
}

TEST_CASE("ratio sums match the unit-pair count") {
  for (std::uint64_t p : {5, 7, 11, 13}) {
    const auto n = oracle::primorial(p);
    const auto n2 = unit_pairs(n, 2);
    for (std::uint64_t g = 2; g <= 60; g += 2) {
      REQUIRE(Rational(unit_pairs(n, g), n2) == ratio_sum_at(g, p));
    }
  }
}

TEST_CASE("closed driving-term totals") {
  CHECK(driving_term_total(6) == 2);
  CHECK(driving_term_total(8) == 1);
  CHECK(driving_term_total(10) == 4);
  CHECK(driving_term_total(30) == 8);
  for (std::uint64_t g = 2; g <= 40; g += 2) {
    const auto r = radical(g);
    if (r.qbar > 13) continue;
    const auto n = oracle::primorial(r.qbar);
    REQUIRE(driving_term_total(g) == unit_pairs(n, g));
  }
}

TEST_CASE("invariance under multiplying the modulus") {
  const auto c5 = primorial_cycle(5);
  // q = 7 does not divide N or g: factor q - 2.
  const auto a = verify_qn_invariance(c5, 7, 6);
  CHECK(a.factor == 5);
  CHECK(a.before == 6);
  CHECK(a.after == 30);
  CHECK(a.holds());
  // q divides g.
  const auto b = verify_qn_invariance(c5, 7, 14);
  CHECK(b.q_divides_g);
  CHECK(b.factor == 6);
  CHECK(b.holds());
  CHECK_FALSE(b.ratio_preserved);
  // q divides N: concatenation, every count scales by q.
  const auto c = verify_qn_invariance(c5, 5, 10);
  CHECK(c.q_divides_n);
  CHECK(c.factor == 5);
  CHECK(c.holds());
  // N2 = 0 below 6.
  const auto d = verify_qn_invariance(GapCycle::seed(), 3, 4);
  CHECK(d.scaled);
  CHECK_THROWS_AS(verify_qn_invariance(c5, 9, 6), InvalidInput);
}

TEST_CASE("route from the radical to the primorial") {
  for (std::uint64_t g : {6, 8, 10, 14, 22, 30, 90, 26}) {
    const auto r = q_route(g);
    INFO("g=" << g);
    CHECK(r.matches_primorial);
    REQUIRE(r.concatenation_ok.has_value());
    CHECK(*r.concatenation_ok);
    CHECK(BigInt(r.stages.back().total) == driving_term_total(g));
  }
  const auto r8 = q_route(8);
  CHECK(r8.radical.degenerate());
  CHECK(r8.stages.front().modulus == 2);
}

TEST_CASE("driving-term totals are multiplicative across stages") {
  // Each stage multiplies the total by p - 2.
  const auto r = q_route(38);
  for (std::size_t i = 1; i < r.stages.size(); ++i) {
    CHECK(r.stages[i].total == r.stages[i - 1].total * (r.stages[i].prime - 2));
  }
}
