#include "gapsieve/polignac.hpp"

#include <algorithm>
#include <string>

#include "gapsieve/census.hpp"
#include "gapsieve/errors.hpp"

namespace gapsieve {

namespace {

void require_even(std::uint64_t g) {
  if (g < 2 || g % 2 != 0) throw InvalidInput("gap must be even and at least 2, got " + std::to_string(g));
}

constexpr std::uint64_t kConcatenationLimit = 1'000'000;

}  // namespace

RadicalDecomposition radical(std::uint64_t g) {
  require_even(g);
  RadicalDecomposition r;
  r.g = g;
  r.primes = prime_factors(g);
  r.Q = 1;
  for (auto q : r.primes) r.Q *= q;
  r.qbar = r.primes.back();
  r.n1 = g / r.Q;
  return r;
}

Rational hl_asymptotic_ratio(std::uint64_t g) {
  require_even(g);
  Rational r = 1;
  for (auto q : prime_factors(g)) {
    if (q > 2) r *= Rational(q - 1, q - 2);
  }
  return r;
}

BigInt driving_term_total(std::uint64_t g) {
  const auto r = radical(g);
  BigInt total = totient(r.Q);
  for (auto p : primes_in(2, r.qbar - 1)) {
    if (r.Q % p != 0) total *= p - 2;
  }
  return total;
}

Rational ratio_sum_at(std::uint64_t g, std::uint64_t p) {
  require_even(g);
  if (!is_prime(p)) throw InvalidInput("ratio_sum_at: p must be prime");
  Rational r = 1;
  for (auto q : prime_factors(g)) {
    if (q > 2 && q <= p) r *= Rational(q - 1, q - 2);
  }
  return r;
}

InvarianceReport verify_qn_invariance(const GapCycle& cycle, std::uint64_t q, std::uint64_t g, unsigned workers) {
  require_even(g);
  if (!is_prime(q)) throw InvalidInput("verify_qn_invariance: q must be prime");
  InvarianceReport r;
  r.modulus = cycle.modulus();
  r.q = q;
  r.g = g;
  r.q_divides_n = cycle.modulus() % q == 0;
  r.q_divides_g = g % q == 0;
  r.factor = r.q_divides_n ? q : r.q_divides_g ? q - 1 : q - 2;

  const GapCycle next = extend_general(cycle, q, workers);
  const Constellation two({2});
  r.before = count_driving_terms(cycle, static_cast<Gap>(g));
  r.after = count_driving_terms(next, static_cast<Gap>(g));
  r.n2_before = count_constellation(cycle, two);
  r.n2_after = count_constellation(next, two);
  r.scaled = r.after == r.factor * r.before;
  // Cross-multiplied so that N_2 = 0 (N <= 6) needs no special case.
  r.ratio_preserved = BigInt(r.before) * r.n2_after == BigInt(r.after) * r.n2_before;
  return r;
}

QRouteReport q_route(std::uint64_t g, unsigned workers) {
  QRouteReport rep;
  rep.radical = radical(g);
  const auto& rad = rep.radical;
  const Gap gap = static_cast<Gap>(g);

  GapCycle cycle = GapCycle::seed();
  for (auto q : rad.primes) {
    if (q > 2) cycle = extend_general(cycle, q, workers);
  }
  rep.stages.push_back({cycle.modulus(), 0, count_driving_terms(cycle, gap)});

  if (g <= kConcatenationLimit) {
    // G(g) is n1 copies of G(Q); build it through the q | N branch.
    GapCycle full = cycle;
    std::uint64_t rest = rad.n1;
    for (auto q : rad.primes) {
      while (rest % q == 0) {
        full = extend_general(full, q, workers);
        rest /= q;
      }
    }
    std::vector<Gap> copies;
    for (std::uint64_t i = 0; i < rad.n1; ++i) copies.insert(copies.end(), cycle.gaps().begin(), cycle.gaps().end());
    rep.concatenation_ok = full.modulus() == g && std::ranges::equal(full.gaps(), copies);
  }

  for (auto p : primes_in(3, rad.qbar - 1)) {
    if (rad.Q % p == 0) continue;
    cycle = extend_general(cycle, p, workers);
    rep.stages.push_back({cycle.modulus(), p, count_driving_terms(cycle, gap)});
  }
  rep.matches_primorial = cycle == primorial_cycle(rad.qbar, workers);
  rep.result = std::move(cycle);
  return rep;
}

}  // namespace gapsieve
