#pragma once

// Pull-style cursors over cycles of gaps. A cursor yields gaps forever,
// wrapping at the end of the cycle; ExtensionCursor builds G(qN) on the fly
// from two independent cursors over G(N), so extensions can be nested
// without materializing the intermediate cycle.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gapsieve/arith.hpp"
#include "gapsieve/cycle.hpp"
#include "gapsieve/errors.hpp"

namespace gapsieve {

class SpanCursor {
 public:
  explicit SpanCursor(std::span<const Gap> gaps, std::size_t start = 0) : gaps_(gaps), i_(start) {}

  Gap next() {
    Gap g = gaps_[i_];
    if (++i_ == gaps_.size()) i_ = 0;
    return g;
  }

 private:
  std::span<const Gap> gaps_;
  std::size_t i_;
};

/// Yields G(qN) for a prime q not dividing N. `gaps` drives the candidate
/// walk; `gens` walks the same cycle to produce the closure distances q*g_i.
/// Both must start at the canonical first gap.
template <class Cursor>
class ExtensionCursor {
 public:
  ExtensionCursor(Cursor gaps, std::uint64_t modulus, std::uint64_t q)
      : gaps_(gaps), gens_(gaps), q_(q), qn_(checked_mul(q, modulus, "extension modulus")), next_closure_(q) {
    if (modulus % q == 0) throw InvalidInput("ExtensionCursor: q divides N");
  }

  Gap next() {
    std::uint64_t acc = 0;
    for (;;) {
      Gap g = gaps_.next();
      acc += g;
      cand_ += g;
      if (cand_ != next_closure_) break;
      next_closure_ += q_ * gens_.next();
    }
    if (cand_ == qn_ + 1) {
      cand_ = 1;
      next_closure_ -= qn_;
    }
    if (acc > std::numeric_limits<Gap>::max()) throw OverflowError("merged gap exceeds 32 bits");
    return static_cast<Gap>(acc);
  }

  std::uint64_t modulus() const { return qn_; }

 private:
  Cursor gaps_;
  Cursor gens_;
  std::uint64_t q_;
  std::uint64_t qn_;
  std::uint64_t cand_ = 1;
  std::uint64_t next_closure_;
};

/// Totient of qN given the totient of N, for q prime.
inline std::uint64_t extended_length(std::uint64_t modulus, std::uint64_t phi, std::uint64_t q) {
  return checked_mul(phi, modulus % q == 0 ? q : q - 1, "extended length");
}

/// Emits the gaps of G(qN), q the next prime for a primorial base, in cycle
/// order without materializing them. The visitor returns false to stop early.
template <class Visitor>
StreamSummary stream_extend(const GapCycle& base, Visitor&& visit) {
  const std::uint64_t q = next_prime(base);
  const std::uint64_t total = extended_length(base.modulus(), base.size(), q);
  ExtensionCursor<SpanCursor> cursor(SpanCursor(base.gaps()), base.modulus(), q);
  StreamSummary s;
  for (std::uint64_t i = 0; i < total; ++i) {
    Gap g = cursor.next();
    ++s.count;
    s.sum += g;
    if (g > s.max_gap) s.max_gap = g;
    if (!visit(g)) {
      s.aborted = true;
      break;
    }
  }
  return s;
}


/// Emits G(base * q_1 * ... * q_k) by nesting extension cursors over a
/// materialized base, for up to three primes q_i not dividing the running
/// modulus. Nothing beyond the base is stored.
template <class Visitor>
StreamSummary stream_stages(const GapCycle& base, const std::vector<std::uint64_t>& primes, Visitor&& visit) {
  std::uint64_t modulus = base.modulus(), total = base.size();
  for (auto q : primes) {
    total = extended_length(modulus, total, q);
    modulus = checked_mul(modulus, q, "stream modulus");
  }
  StreamSummary s;
  auto drain = [&](auto& cursor) {
    for (std::uint64_t i = 0; i < total; ++i) {
      Gap g = cursor.next();
      ++s.count;
      s.sum += g;
      if (g > s.max_gap) s.max_gap = g;
      if (!visit(g)) {
        s.aborted = true;
        break;
      }
    }
  };
  using L1 = ExtensionCursor<SpanCursor>;
  using L2 = ExtensionCursor<L1>;
  using L3 = ExtensionCursor<L2>;
  const std::uint64_t n0 = base.modulus();
  switch (primes.size()) {
    case 0: {
      SpanCursor c(base.gaps());
      drain(c);
      break;
    }
    case 1: {
      L1 c(SpanCursor(base.gaps()), n0, primes[0]);
      drain(c);
      break;
    }
    case 2: {
      L2 c(L1(SpanCursor(base.gaps()), n0, primes[0]), n0 * primes[0], primes[1]);
      drain(c);
      break;
    }
    case 3: {
      L3 c(L2(L1(SpanCursor(base.gaps()), n0, primes[0]), n0 * primes[0], primes[1]),
           n0 * primes[0] * primes[1], primes[2]);
      drain(c);
      break;
    }
    default:
      throw InvalidInput("stream_stages nests at most three extensions");
  }
  return s;
}

}  // namespace gapsieve
