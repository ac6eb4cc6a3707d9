#include <doctest.h>

#include "gapsieve/census.hpp"
#include "gapsieve/errors.hpp"
#include "oracles.hpp"

using namespace gapsieve;

namespace {

std::uint64_t occurrences(const GapCycle& c, std::vector<Gap> s) { return count_constellation(c, Constellation(std::move(s))); }

}  // namespace

TEST_CASE("constellation counts in G(5#)") {
  const auto c = primorial_cycle(5);
  CHECK(occurrences(c, {2}) == 3);
  CHECK(occurrences(c, {4}) == 3);
  CHECK(occurrences(c, {6}) == 2);
  CHECK(occurrences(c, {2, 4}) == 2);
  CHECK(occurrences(c, {2, 4, 2}) == 1);
  CHECK(occurrences(c, {4, 2, 4, 2, 4}) == 1);
  CHECK(occurrences(c, {4, 2, 4}) == 2);
  CHECK(occurrences(c, {2, 6}) == 1);  // wraps from the last gap to the first
  CHECK_THROWS_AS(Constellation({}), InvalidInput);
  CHECK_THROWS_AS(Constellation({3}), InvalidInput);
}

TEST_CASE("worked counts at 7# and 11#") {
  const auto c7 = primorial_cycle(7), c11 = primorial_cycle(11);
  CHECK(occurrences(c7, {6}) == 14);
  CHECK(occurrences(c7, {2}) == 15);
  CHECK(occurrences(c7, {2, 4}) + occurrences(c7, {4, 2}) == 16);
  CHECK(occurrences(c11, {6}) == 142);
  CHECK(occurrences(c11, {2}) == 135);
}

TEST_CASE("census matches the naive rescan") {
  for (std::uint64_t p : {5, 7, 11}) {
    const auto c = primorial_cycle(p);
    const std::vector<Gap> g(c.gaps().begin(), c.gaps().end());
    const auto expect = oracle::naive_census(g, 40, 8);
    const auto table = driving_term_census(c, 40, 8);
    std::size_t nonzero = 0;
    for (const auto& [key, count] : expect) {
      REQUIRE(table.count(key.first, key.second) == count);
      ++nonzero;
    }
    CHECK(table.counts().size() == nonzero);
  }
}

TEST_CASE("sharded and streamed census agree with serial") {
  const auto c = primorial_cycle(13);
  const auto serial = driving_term_census(c, 32, 9);
  for (unsigned w : {2u, 3u, 7u, 64u}) CHECK(driving_term_census(c, 32, 9, {w}) == serial);

  StreamingCensus sc(c.modulus(), 32, 9);
  for (Gap g : c.gaps()) sc.push(g);
  CHECK(sc.finish() == serial);

  // Census of G(17#) fed straight from the extension of G(13#).
  StreamingCensus next(c.modulus() * 17, 12, 4);
  stream_extend(c, [&](Gap g) {
    next.push(g);
    return true;
  });
  CHECK(next.finish() == driving_term_census(primorial_cycle(17), 12, 4));
}

TEST_CASE("window length limits") {
  const auto c = primorial_cycle(3);
  CHECK_THROWS_AS(driving_term_census(c, 8, 3), InvalidInput);
  CHECK_NOTHROW(driving_term_census(c, 8, 2));
  CHECK_THROWS_AS(driving_term_census(c, 0, 2), InvalidInput);

  // Periodic windows on the seed: 2+2+2+2 = 8.
  const auto seed = driving_term_census(GapCycle::seed(), 8, 4, {1, true});
  CHECK(seed.count(8, 4) == 1);
  CHECK(seed.count(8, 3) == 0);
  CHECK(seed.count(6, 3) == 1);

  StreamingCensus short_stream(6, 8, 3);
  short_stream.push(4);
  short_stream.push(2);
  CHECK_THROWS_AS(short_stream.finish(), InvalidInput);

  const auto t = driving_term_census(primorial_cycle(5), 10, 3);
  CHECK_THROWS_AS(t.count(12, 1), InvalidInput);
  CHECK_THROWS_AS(t.count(6, 4), InvalidInput);
}

TEST_CASE("ratio vectors at 5#") {
  const auto t = driving_term_census(primorial_cycle(5), 10, 3);
  CHECK(ratio_vector(t, 6, 3).entries == std::vector<Rational>{Rational(2, 3), Rational(4, 3), 0});
  CHECK(ratio_vector(t, 8, 3).entries == std::vector<Rational>{0, Rational(2, 3), Rational(1, 3)});
  CHECK(ratio_vector(t, 10, 3).entries == std::vector<Rational>{0, Rational(2, 3), Rational(2, 3)});
  CHECK(ratio_vector(t, 2, 1).entries == std::vector<Rational>{1});
  CHECK(ratio_vector(t, 10, 3).sum() == Rational(4, 3));

  const auto no_twins = driving_term_census(GapCycle(12, {6, 6}), 12, 2);
  CHECK_THROWS_AS(ratio_vector(no_twins, 6, 2), InvalidInput);
}

TEST_CASE("driving terms of a constellation") {
  const auto c5 = primorial_cycle(5);
  // (6) at 7# comes from (6) copies and from closures inside (2,4) and (4,2).
  CHECK(count_driving_terms_of(c5, Constellation({6})) == 4);
  CHECK(count_driving_terms_of(c5, Constellation({2})) == 0);

  // Spot-check the recurrence rows against the direct counters.
  const auto rep = verify_constellation_recurrence(c5, 4);
  CHECK(rep.failures() == 0);
  CHECK(rep.next_prime == 7);
  const auto c7 = primorial_cycle(7);
  for (const auto& row : rep.rows) {
    const Constellation s(row.s);
    CHECK(row.before == count_constellation(c5, s));
    CHECK(row.after == count_constellation(c7, s));
    CHECK(row.driving == count_driving_terms_of(c5, s));
  }
}

TEST_CASE("constellation recurrence holds at small stages") {
  for (std::uint64_t p : {5, 7, 11, 13}) {
    const auto rep = verify_constellation_recurrence(primorial_cycle(p), 4);
    CHECK(rep.failures() == 0);
    CHECK(rep.rows.size() > 10);
  }
}

TEST_CASE("periodic driving-term totals") {
  CHECK(count_driving_terms(primorial_cycle(3), 6) == 2);
  CHECK(count_driving_terms(primorial_cycle(5), 10) == 4);
  CHECK(count_driving_terms(GapCycle::seed(), 8) == 1);
  const auto c = primorial_cycle(7);
  const auto t = driving_term_census(c, 30, 48);
  for (Gap g = 2; g <= 30; g += 2) CHECK(BigInt(count_driving_terms(c, g)) == t.row_total(g));
}

TEST_CASE("spikes and monotone runs") {
  const auto r5 = max_gap_and_et_constellations(primorial_cycle(5), 3);
  CHECK(r5.max_after_two == 6);
  CHECK(r5.max_before_two == 6);
  REQUIRE(r5.next_stage_max_after_two.has_value());
  CHECK(r5.spike_grows());

  const auto r7 = max_gap_and_et_constellations(primorial_cycle(7), 3);
  CHECK(r7.has_increasing_k);
  CHECK(r7.has_decreasing_k);
  CHECK(r7.max_after_two == 10);
  CHECK(r7.spike_grows());

  const auto no_next = max_gap_and_et_constellations(primorial_cycle(7), 99, false);
  CHECK_FALSE(no_next.has_increasing_k);
  CHECK_FALSE(no_next.next_stage_max_after_two.has_value());
}
