#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gapsieve/cycle.hpp"

namespace gapsieve {

/// The front of G(p_k#) that is already made of true prime gaps: from
/// p_{k+1} up to the last candidate below p_{k+1}^2.
struct SurvivorReport {
  std::uint64_t stage_prime = 0;
  std::uint64_t next_prime = 0;
  std::uint64_t last_value = 0;  // largest candidate reached, < next_prime^2
  std::vector<Gap> gaps;
  std::vector<bool> matched;     // per gap, against the sieve oracle
  std::size_t oracle_count = 0;  // prime gaps the oracle has on the same range

  bool all_matched() const;
};

SurvivorReport survivors(const GapCycle& cycle);

/// Gaps between consecutive primes <= limit from the segmented sieve.
std::vector<Gap> prime_gap_oracle(std::uint64_t limit, std::uint64_t max_bytes = 1ull << 31);

/// One sieving step applied to the candidates 1..N+1 of G(p_k#).
struct TraceStage {
  std::uint64_t prime = 0;
  std::vector<std::uint64_t> values;     // candidates before this step
  std::vector<std::uint64_t> closures;   // prime * candidate, within the segment
  std::vector<std::uint64_t> distances;  // between consecutive closures
  std::vector<bool> bold;                // gap values[i] -> values[i+1] is confirmed as a prime gap

  std::vector<Gap> gaps() const;
  /// Maximal runs of bold gaps, in order.
  std::vector<std::vector<Gap>> bold_runs() const;
};

struct ClosureTrace {
  std::uint64_t stage_prime = 0;
  std::uint64_t next_prime = 0;
  std::uint64_t segment_end = 0;  // N + 1
  std::vector<TraceStage> stages;
  std::vector<std::uint64_t> final_values;

  std::vector<Gap> final_gaps() const;
};

/// Sieves the segment by each prime from p_{k+1} through up_to_prime. With
/// up_to_prime < p_{k+1} there are no stages.
ClosureTrace closure_trace(const GapCycle& cycle, std::uint64_t up_to_prime);

/// Text rendering in the style "(p=11) => 10, + [2 4 ...]^110 + ...", bold
/// gaps wrapped in asterisks.
std::string render_trace_text(const ClosureTrace& trace);
std::string render_trace_json(const ClosureTrace& trace);

}  // namespace gapsieve
