#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gapsieve/arith.hpp"
#include "gapsieve/cycle.hpp"

namespace gapsieve {

/// g = Q * n1 with Q the product of the distinct primes dividing g.
struct RadicalDecomposition {
  std::uint64_t g = 0;
  std::uint64_t Q = 0;
  std::uint64_t qbar = 0;  // largest prime factor
  std::uint64_t n1 = 0;
  std::vector<std::uint64_t> primes;

  /// Q = 2: the closed count degenerates to the seed cycle G(2).
  bool degenerate() const { return Q == 2; }
};

RadicalDecomposition radical(std::uint64_t g);

/// Product over odd primes q | g of (q-1)/(q-2).
Rational hl_asymptotic_ratio(std::uint64_t g);

/// Closed count of the driving terms of g in G(qbar#):
/// phi(Q) * prod_{p < qbar, p not dividing Q} (p-2).
BigInt driving_term_total(std::uint64_t g);

/// Predicted sum_j w_{g,j}(p#): product over odd primes q | g, q <= p.
Rational ratio_sum_at(std::uint64_t g, std::uint64_t p);

struct InvarianceReport {
  std::uint64_t modulus = 0;
  std::uint64_t q = 0;
  std::uint64_t g = 0;
  std::uint64_t before = 0;      // sum_j n_{g,j}(N)
  std::uint64_t after = 0;       // sum_j n_{g,j}(qN)
  std::uint64_t n2_before = 0;
  std::uint64_t n2_after = 0;
  std::uint64_t factor = 0;      // q if q | N, else q-2, or q-1 when q | g
  bool q_divides_n = false;
  bool q_divides_g = false;
  bool scaled = false;           // after == factor * before
  bool ratio_preserved = false;  // before/n2_before == after/n2_after

  bool holds() const { return scaled && (q_divides_g && !q_divides_n ? true : ratio_preserved); }
};

InvarianceReport verify_qn_invariance(const GapCycle& cycle, std::uint64_t q, std::uint64_t g, unsigned workers = 1);

/// The proof route for the driving terms of g: G(Q) from the seed, then the
/// primes below qbar that do not divide Q, one at a time.
struct QRouteStage {
  std::uint64_t modulus = 0;
  std::uint64_t prime = 0;  // prime multiplied in at this stage (0 for G(Q))
  std::uint64_t total = 0;  // sum_j n_{g,j} in this cycle
};

struct QRouteReport {
  RadicalDecomposition radical;
  std::vector<QRouteStage> stages;
  std::optional<bool> concatenation_ok;  // G(g) == n1 copies of G(Q), when small enough to build
  GapCycle result = GapCycle::seed();
  bool matches_primorial = false;        // result == G(qbar#)
};

QRouteReport q_route(std::uint64_t g, unsigned workers = 1);

}  // namespace gapsieve
