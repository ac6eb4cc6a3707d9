#include <doctest.h>

#include <algorithm>
#include <random>

#include "gapsieve/cycle.hpp"
#include "gapsieve/errors.hpp"
#include "oracles.hpp"

using namespace gapsieve;

namespace {

const std::vector<Gap> kG7 = {10, 2, 4, 2, 4, 6, 2, 6, 4, 2, 4, 6, 6, 2, 6, 4, 2, 6, 4, 6, 8, 4, 2, 4,
                              2,  4, 8, 6, 4, 6, 2, 4, 6, 2, 6, 6, 4, 2, 4, 6, 2, 6, 4, 2, 4, 2, 10, 2};

std::vector<Gap> vec(const GapCycle& c) { return {c.gaps().begin(), c.gaps().end()}; }

}  // namespace

TEST_CASE("small primorial cycles") {
  CHECK(vec(GapCycle::seed()) == std::vector<Gap>{2});
  CHECK(next_prime(GapCycle::seed()) == 3);
  CHECK(vec(primorial_cycle(3)) == std::vector<Gap>{4, 2});
  CHECK(vec(primorial_cycle(5)) == std::vector<Gap>{6, 4, 2, 4, 2, 4, 6, 2});
  CHECK(vec(primorial_cycle(7)) == kG7);
  CHECK(next_prime(primorial_cycle(5)) == 7);
}

TEST_CASE("primorial cycles match the gcd oracle") {
  for (std::uint64_t p : {3, 5, 7, 11, 13}) {
    const auto c = primorial_cycle(p);
    REQUIRE(vec(c) == oracle::cycle_by_gcd(oracle::primorial(p)));
    CHECK(c.sieve_stage() == p);
  }
}

TEST_CASE("extend_general on arbitrary moduli matches the gcd oracle") {
  std::mt19937_64 rng(20240611);
  const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13};
  for (int trial = 0; trial < 60; ++trial) {
    GapCycle c = GapCycle::seed();
    for (int step = 0; step < 6; ++step) {
      const std::uint64_t q = primes[rng() % 6];
      if (c.modulus() * q > 200000) break;
      c = extend_general(c, q, 1 + static_cast<unsigned>(rng() % 4));
      REQUIRE(vec(c) == oracle::cycle_by_gcd(c.modulus()));
    }
  }
}

TEST_CASE("q dividing N concatenates") {
  CHECK(vec(extend_general(GapCycle::seed(), 2)) == std::vector<Gap>{2, 2});
  const GapCycle g6(6, {4, 2});
  CHECK(vec(extend_general(g6, 2)) == std::vector<Gap>{4, 2, 4, 2});
  CHECK(vec(extend_general(g6, 5)) == std::vector<Gap>{6, 4, 2, 4, 2, 4, 6, 2});
  CHECK_THROWS_AS(extend_general(g6, 4), InvalidInput);
}

TEST_CASE("worker count does not change the output") {
  const auto base = primorial_cycle(11);
  const auto one = extend_general(base, 13, 1);
  for (unsigned w : {2u, 3u, 8u, 13u, 40u}) CHECK(extend_general(base, 13, w) == one);
  CHECK(extend_by_next_prime(base) == one);
}

TEST_CASE("cycle validation") {
  CHECK_THROWS_AS(GapCycle(6, {4, 4}), InvalidInput);
  CHECK_THROWS_AS(GapCycle(6, {}), InvalidInput);
  CHECK_THROWS_AS(GapCycle(6, {6, 0}), InvalidInput);
  CHECK_THROWS_AS(next_prime(GapCycle(12, {4, 2, 4, 2})), InvalidInput);
  const auto c = primorial_cycle(5);
  CHECK(c.generator(0) == 1);
  CHECK(c.generator(1) == 7);
  CHECK(c.generator(8) == 31);
}

TEST_CASE("closure plans") {
  const auto p3 = closure_plan(primorial_cycle(3), 5);
  CHECK(p3.closures.size() == 2);
  CHECK(p3.distances == std::vector<std::uint64_t>{20, 10});

  const auto c5 = primorial_cycle(5);
  const auto p5 = closure_plan(c5, 7);
  CHECK(p5.closures.size() == c5.size());
  CHECK(p5.distances == std::vector<std::uint64_t>{42, 28, 14, 28, 14, 28, 42, 14});
  CHECK(p5.closures.front().value == 7);
  CHECK(apply_closure_plan(c5, p5) == primorial_cycle(7));
  CHECK_THROWS_AS(closure_plan(c5, 5), InvalidInput);

  // First distance is q(q-1); all distances are q times a source gap.
  for (std::uint64_t p : {5, 7, 11}) {
    const auto c = primorial_cycle(p);
    const auto q = next_prime(c);
    const auto plan = closure_plan(c, q);
    CHECK(plan.distances.front() == q * (q - 1));
    for (std::size_t i = 0; i < plan.distances.size(); ++i) CHECK(plan.distances[i] == q * c[i]);
    CHECK(apply_closure_plan(c, plan) == extend_general(c, q));
  }
}

TEST_CASE("remark properties") {
  for (std::uint64_t p : {3, 5, 7, 11, 13, 17}) {
    const auto rep = verify_remark_properties(primorial_cycle(p));
    for (const auto& chk : rep.checks) {
      INFO("p=" << p << " " << chk.name << " " << chk.detail);
      CHECK((!chk.applicable || chk.passed));
    }
  }
  CHECK(expected_middle_constellation(7) == std::vector<Gap>{4, 2, 4, 2, 4});
  CHECK(expected_middle_constellation(11) == std::vector<Gap>{8, 4, 2, 4, 2, 4, 8});
  const auto rep = verify_remark_properties(primorial_cycle(7));
  REQUIRE(rep.find("middle_constellation") != nullptr);
  CHECK(rep.find("middle_constellation")->applicable);

  // A tampered cycle fails symmetry.
  auto g = vec(primorial_cycle(5));
  std::swap(g[1], g[2]);
  CHECK_FALSE(verify_remark_properties(GapCycle(30, g)).all_passed());
}

TEST_CASE("middle constellation halves are monotone") {
  for (std::uint64_t p : {5, 7, 11, 13}) {
    const auto c = primorial_cycle(p);
    const auto pat = expected_middle_constellation(next_prime(c));
    const std::size_t half = pat.size() / 2;
    for (std::size_t i = 0; i + 1 < half; ++i) CHECK(pat[i] > pat[i + 1]);
    for (std::size_t i = half + 1; i + 1 < pat.size(); ++i) CHECK(pat[i] < pat[i + 1]);
  }
}

TEST_CASE("double gaps 2 p_k") {
  const auto r7 = find_double_gap_2pk(primorial_cycle(7), 5);
  CHECK(r7.found());
  CHECK(r7.positions.size() >= 2);
  CHECK(r7.symmetric_pair == std::make_pair<std::size_t, std::size_t>(0, 46));
  CHECK(find_double_gap_2pk(primorial_cycle(5), 3).found());
  CHECK(find_double_gap_2pk(primorial_cycle(13), 11).found());
}

TEST_CASE("streamed extension equals materialized") {
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
    const auto c = primorial_cycle(p);
    std::vector<Gap> got;
    const auto s = stream_extend(c, [&](Gap g) {
      got.push_back(g);
      return true;
    });
    REQUIRE(got == vec(extend_by_next_prime(c)));
    CHECK(s.count == got.size());
    CHECK(s.sum == c.modulus() * next_prime(c));
  }
  std::size_t seen = 0;
  const auto s = stream_extend(primorial_cycle(7), [&](Gap) { return ++seen < 10; });
  CHECK(s.aborted);
  CHECK(s.count == 10);
}

TEST_CASE("nested extension cursors") {
  const auto c5 = primorial_cycle(5);
  using Inner = ExtensionCursor<SpanCursor>;
  ExtensionCursor<Inner> outer(Inner(SpanCursor(c5.gaps()), 30, 7), 210, 11);
  const auto c11 = primorial_cycle(11);
  std::vector<Gap> got;
  for (std::size_t i = 0; i < 2 * c11.size(); ++i) got.push_back(outer.next());
  CHECK(std::equal(c11.gaps().begin(), c11.gaps().end(), got.begin()));
  CHECK(std::equal(c11.gaps().begin(), c11.gaps().end(), got.begin() + static_cast<std::ptrdiff_t>(c11.size())));
}

TEST_CASE("stacked streaming stages") {
  const auto c5 = primorial_cycle(5);
  for (std::size_t depth = 0; depth <= 3; ++depth) {
    const std::vector<std::uint64_t> all = {7, 11, 13};
    const std::vector<std::uint64_t> qs(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(depth));
    const auto want = depth == 0 ? c5 : primorial_cycle(qs.back());
    std::vector<Gap> got;
    const auto s = stream_stages(c5, qs, [&](Gap g) {
      got.push_back(g);
      return true;
    });
    REQUIRE(got == vec(want));
    CHECK(s.sum == want.modulus());
  }
  CHECK_THROWS_AS(stream_stages(c5, {7, 11, 13, 17}, [](Gap) { return true; }), InvalidInput);
}
