#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gapsieve/arith.hpp"
#include "gapsieve/cycle.hpp"

namespace gapsieve {

/// A run of consecutive gaps. A single gap is a constellation of length 1.
class Constellation {
 public:
  explicit Constellation(std::vector<Gap> gaps);

  std::span<const Gap> gaps() const { return gaps_; }
  std::uint64_t sum() const { return sum_; }
  std::size_t length() const { return gaps_.size(); }

  auto operator<=>(const Constellation&) const = default;

 private:
  std::vector<Gap> gaps_;
  std::uint64_t sum_ = 0;
};

/// Exact counts n_{g,j}(N) of cyclic windows of j consecutive gaps summing to
/// g, overlaps included. Cells inside [1, g_max] x [1, j_max] that are absent
/// from the sparse map are zero.
class CensusTable {
 public:
  using Key = std::pair<Gap, std::uint32_t>;

  CensusTable(std::uint64_t modulus, Gap g_max, std::uint32_t j_max, std::map<Key, BigInt> counts);

  std::uint64_t modulus() const { return modulus_; }
  Gap g_max() const { return g_max_; }
  std::uint32_t j_max() const { return j_max_; }
  const std::map<Key, BigInt>& counts() const { return counts_; }

  /// Throws InvalidInput outside the censused range.
  BigInt count(Gap g, std::uint32_t j) const;
  BigInt row_total(Gap g) const;
  /// Longest j with a nonzero count for g; 0 when the row is empty.
  std::uint32_t max_length(Gap g) const;
  /// N_2, the number of gaps equal to 2.
  const BigInt& n2() const { return n2_; }

  bool operator==(const CensusTable& other) const {
    return modulus_ == other.modulus_ && g_max_ == other.g_max_ && j_max_ == other.j_max_ &&
           counts_ == other.counts_;
  }

 private:
  std::uint64_t modulus_;
  Gap g_max_;
  std::uint32_t j_max_;
  std::map<Key, BigInt> counts_;
  BigInt n2_;
};

struct CensusOptions {
  unsigned workers = 1;
  /// Allow windows longer than the cycle, read off its periodic extension.
  bool periodic = false;
};

/// Counts every window of length 1..j_max whose sum is at most g_max.
/// Shards own disjoint ranges of start positions and read past their end, so
/// the merged table does not depend on the shard count.
CensusTable driving_term_census(const GapCycle& cycle, Gap g_max, std::uint32_t j_max, CensusOptions options = {});

/// Census fed one gap at a time, in cycle order, with O(j_max) memory plus
/// the first j_max-1 gaps kept for the wrap-around windows.
class StreamingCensus {
 public:
  StreamingCensus(std::uint64_t modulus, Gap g_max, std::uint32_t j_max);

  void push(Gap g);
  std::uint64_t pushed() const { return count_; }
  CensusTable finish() const;

 private:
  void count_windows_ending_here(std::uint64_t min_length, std::vector<std::uint64_t>& dense) const;

  std::uint64_t modulus_;
  Gap g_max_;
  std::uint32_t j_max_;
  std::vector<Gap> ring_;
  std::vector<Gap> head_;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> dense_;
};

/// Cyclic occurrences of s, overlapping instances counted.
std::uint64_t count_constellation(const GapCycle& cycle, const Constellation& s);

/// n_{s,j+1}: windows of length j+1 that become s after one interior closure,
/// counted once per (window, closure) pair.
std::uint64_t count_driving_terms_of(const GapCycle& cycle, const Constellation& s);

/// Sum over all lengths of n_{g,j}, read off the periodic extension.
std::uint64_t count_driving_terms(const GapCycle& cycle, Gap g);

/// One row of the constellation recurrence
///   N_s(p_{k+1}#) = (p_{k+1} - j - 1) N_s(p_k#) + n_{s,j+1}(p_k#).
struct RecurrenceRow {
  std::vector<Gap> s;
  std::uint64_t before = 0;   // N_s(p_k#)
  std::uint64_t driving = 0;  // n_{s,j+1}(p_k#)
  std::uint64_t after = 0;    // N_s(p_{k+1}#), counted in the extended cycle
  bool holds() const;
  std::uint64_t next_prime = 0;
};

struct RecurrenceReport {
  std::uint64_t stage_prime = 0;
  std::uint64_t next_prime = 0;
  std::vector<RecurrenceRow> rows;  // every s of sum < 2 p_{k+1} and length <= max_len seen in either cycle
  std::size_t failures() const;
};

/// Checks the recurrence for every short constellation, counting both sides
/// from the actual cycles G(p_k#) and G(p_{k+1}#).
RecurrenceReport verify_constellation_recurrence(const GapCycle& base, std::uint32_t max_len, unsigned workers = 1);

/// w_{g,j} = n_{g,j} / N_2 for a fixed gap g.
struct RatioVector {
  Gap g = 0;
  std::vector<Rational> entries;  // j = 1..J
  std::uint64_t basis_modulus = 0;

  std::size_t dimension() const { return entries.size(); }
  Rational sum() const;
  bool operator==(const RatioVector&) const = default;
};

RatioVector ratio_vector(const CensusTable& table, Gap g, std::uint32_t dimension);

struct MonotoneRun {
  std::size_t start = 0;
  std::size_t length = 0;
};

struct SpikeReport {
  Gap max_after_two = 0;        // largest g with the constellation (2, g)
  std::size_t two_position = 0;
  Gap max_before_two = 0;       // largest g with (g, 2)
  MonotoneRun longest_increasing;
  MonotoneRun longest_decreasing;
  std::uint32_t k = 0;
  bool has_increasing_k = false;
  bool has_decreasing_k = false;
  std::optional<Gap> next_stage_max_after_two;

  bool spike_grows() const { return next_stage_max_after_two && *next_stage_max_after_two > max_after_two; }
};

/// Largest gap next to a 2, and strictly monotone runs of at least k gaps.
/// With check_next_stage, also streams the next primorial stage to confirm
/// that the largest gap next to a 2 grows.
SpikeReport max_gap_and_et_constellations(const GapCycle& cycle, std::uint32_t k, bool check_next_stage = true);

}  // namespace gapsieve
