#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gapsieve/arith.hpp"

namespace gapsieve {

/// Cycle of gaps among the generators of Z mod N, in canonical rotation:
/// the first gap runs from generator 1 to the next generator, the last one
/// wraps from N-1 back to N+1.
///
/// Values are immutable once built. The single-entry cycle (2) over N = 2 is
/// the seed of the primorial recursion.
class GapCycle {
 public:
  /// Validates that the gaps are positive and sum to `modulus`.
  GapCycle(std::uint64_t modulus, std::vector<Gap> gaps);

  static GapCycle seed();

  std::uint64_t modulus() const { return modulus_; }
  std::span<const Gap> gaps() const { return gaps_; }
  std::size_t size() const { return gaps_.size(); }
  Gap operator[](std::size_t i) const { return gaps_[i]; }

  /// p when modulus == p#, otherwise 0.
  std::uint64_t sieve_stage() const { return stage_; }
  bool is_primorial() const { return stage_ != 0; }

  /// Generator reached after the first j gaps: 1 + g_1 + ... + g_j.
  std::uint64_t generator(std::size_t j) const;

  /// Moves the storage out; the cycle is left empty.
  std::vector<Gap> release() && { return std::move(gaps_); }

  bool operator==(const GapCycle& other) const {
    return modulus_ == other.modulus_ && gaps_ == other.gaps_;
  }

 private:
  std::uint64_t modulus_;
  std::vector<Gap> gaps_;
  std::uint64_t stage_;
};

struct Closure {
  std::uint64_t position;  // index j of the concatenated gap that ends at `value`; gaps j and j+1 merge
  std::uint64_t value;     // the removed candidate, q * generator
};

/// Where the closures land when G(N) is extended by a prime q not dividing N.
struct ClosurePlan {
  std::uint64_t prime = 0;
  std::uint64_t source_modulus = 0;
  std::vector<Closure> closures;         // ascending, one per generator of Z mod N
  std::vector<std::uint64_t> distances;  // value[i+1] - value[i]; the last one wraps to value[0] + qN
  bool wrap_flag = false;                // final interval runs past the end of the q copies
};

struct StreamSummary {
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  Gap max_gap = 0;
  bool aborted = false;
};

struct PropertyCheck {
  std::string name;
  bool applicable = true;
  bool passed = true;
  std::string detail;
};

struct RemarkReport {
  std::vector<PropertyCheck> checks;
  bool all_passed() const;
  const PropertyCheck* find(const std::string& name) const;
};

struct DoubleGapReport {
  Gap target = 0;
  std::vector<std::size_t> positions;  // every index holding `target`
  std::optional<std::pair<std::size_t, std::size_t>> symmetric_pair;
  bool found() const { return positions.size() >= 2 && symmetric_pair.has_value(); }
};

/// R1: the next sieving prime, g_1 + 1. Throws InvalidInput for non-primorial cycles.
std::uint64_t next_prime(const GapCycle& cycle);

/// G(qN) from G(N). For q | N the result is q concatenated copies; otherwise
/// the copies are closed at q and at q times every generator, tracked with
/// running sums of q * g_i. Output is identical for any worker count.
GapCycle extend_general(const GapCycle& cycle, std::uint64_t q, unsigned workers = 1);

GapCycle extend_by_next_prime(const GapCycle& cycle, unsigned workers = 1);

/// G(p#) built from the seed through every prime <= p.
GapCycle primorial_cycle(std::uint64_t p, unsigned workers = 1);

ClosurePlan closure_plan(const GapCycle& cycle, std::uint64_t q);

/// Concatenates plan.prime copies and merges at the planned positions.
GapCycle apply_closure_plan(const GapCycle& cycle, const ClosurePlan& plan);

RemarkReport verify_remark_properties(const GapCycle& cycle);

/// 2^j, ..., 4, 2, 4, 2, 4, ..., 2^j with j minimal such that 2^(j+1) > next_prime.
std::vector<Gap> expected_middle_constellation(std::uint64_t next_prime);

/// Locates the gaps 2*pk in G(p_{k+1}#).
DoubleGapReport find_double_gap_2pk(const GapCycle& cycle, std::uint64_t pk);

}  // namespace gapsieve

#include "gapsieve/extension.hpp"
