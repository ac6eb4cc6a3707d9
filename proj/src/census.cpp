#include "gapsieve/census.hpp"

#include <algorithm>
#include <exception>
#include <string>
#include <thread>

#include "gapsieve/errors.hpp"

namespace gapsieve {

Constellation::Constellation(std::vector<Gap> gaps) : gaps_(std::move(gaps)) {
  if (gaps_.empty()) throw InvalidInput("constellation must be nonempty");
  for (Gap g : gaps_) {
    if (g == 0 || g % 2 != 0) throw InvalidInput("constellation gaps must be positive and even");
    sum_ += g;
  }
}

CensusTable::CensusTable(std::uint64_t modulus, Gap g_max, std::uint32_t j_max, std::map<Key, BigInt> counts)
    : modulus_(modulus), g_max_(g_max), j_max_(j_max), counts_(std::move(counts)) {
  for (auto it = counts_.begin(); it != counts_.end();) {
    if (it->second == 0) {
      it = counts_.erase(it);
      continue;
    }
    if (it->first.first > g_max_ || it->first.second == 0 || it->first.second > j_max_) {
      throw InvalidInput("census cell outside the table range");
    }
    ++it;
  }
  if (auto it = counts_.find({2, 1}); it != counts_.end()) n2_ = it->second;
}

BigInt CensusTable::count(Gap g, std::uint32_t j) const {
  if (g > g_max_ || j == 0 || j > j_max_) {
    throw InvalidInput("census cell (" + std::to_string(g) + ", " + std::to_string(j) + ") outside the table");
  }
  auto it = counts_.find({g, j});
  return it == counts_.end() ? BigInt(0) : it->second;
}

BigInt CensusTable::row_total(Gap g) const {
  BigInt total = 0;
  for (auto it = counts_.lower_bound({g, 0}); it != counts_.end() && it->first.first == g; ++it) total += it->second;
  return total;
}

std::uint32_t CensusTable::max_length(Gap g) const {
  std::uint32_t best = 0;
  for (auto it = counts_.lower_bound({g, 0}); it != counts_.end() && it->first.first == g; ++it) {
    best = std::max(best, it->first.second);
  }
  return best;
}

namespace {

using Dense = std::vector<std::uint64_t>;

std::size_t cell(Gap g, std::uint64_t j, std::uint32_t j_max) {
  return static_cast<std::size_t>(g) * (j_max + 1) + static_cast<std::size_t>(j);
}

void count_starts(std::span<const Gap> g, Gap g_max, std::uint32_t j_max, std::size_t first, std::size_t last,
                  Dense& dense) {
  const std::size_t n = g.size();
  for (std::size_t s = first; s < last; ++s) {
    std::uint64_t sum = 0;
    std::size_t idx = s;
    for (std::uint32_t len = 1; len <= j_max; ++len) {
      sum += g[idx];
      if (sum > g_max) break;
      ++dense[cell(static_cast<Gap>(sum), len, j_max)];
      if (++idx == n) idx = 0;
    }
  }
}

CensusTable to_table(std::uint64_t modulus, Gap g_max, std::uint32_t j_max, const Dense& dense) {
  std::map<CensusTable::Key, BigInt> counts;
  for (Gap g = 1; g <= g_max; ++g) {
    for (std::uint32_t j = 1; j <= j_max; ++j) {
      if (auto c = dense[cell(g, j, j_max)]; c != 0) counts.emplace(CensusTable::Key{g, j}, BigInt(c));
    }
  }
  return CensusTable(modulus, g_max, j_max, std::move(counts));
}

void check_ranges(Gap g_max, std::uint32_t j_max) {
  if (g_max < 1 || j_max < 1) throw InvalidInput("census needs g_max >= 1 and j_max >= 1");
}

}  // namespace

CensusTable driving_term_census(const GapCycle& cycle, Gap g_max, std::uint32_t j_max, CensusOptions options) {
  check_ranges(g_max, j_max);
  const auto g = cycle.gaps();
  if (!options.periodic && j_max > g.size()) {
    throw InvalidInput("census window length " + std::to_string(j_max) + " exceeds cycle length " +
                       std::to_string(g.size()));
  }
  const std::size_t n = g.size();
  const std::size_t shards = std::clamp<std::size_t>(options.workers, 1, n);
  const std::size_t cells = cell(g_max, j_max, j_max) + 1;
  std::vector<Dense> partial(shards, Dense(cells, 0));
  auto bound = [&](std::size_t i) { return n * i / shards; };

  if (shards == 1) {
    count_starts(g, g_max, j_max, 0, n, partial[0]);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(shards);
    for (std::size_t i = 0; i < shards; ++i) {
      threads.emplace_back([&, i] {
        try {
          count_starts(g, g_max, j_max, bound(i), bound(i + 1), partial[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  Dense merged(cells, 0);
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < cells; ++i) merged[i] += p[i];
  }
  return to_table(cycle.modulus(), g_max, j_max, merged);
}

StreamingCensus::StreamingCensus(std::uint64_t modulus, Gap g_max, std::uint32_t j_max)
    : modulus_(modulus), g_max_(g_max), j_max_(j_max), ring_(j_max, 0) {
  check_ranges(g_max, j_max);
  dense_.assign(cell(g_max, j_max, j_max) + 1, 0);
  head_.reserve(j_max);
}

void StreamingCensus::count_windows_ending_here(std::uint64_t min_length, Dense& dense) const {
  // Windows end at absolute position count_-1 and start at count_-len.
  const std::uint64_t e = count_ - 1;
  const std::uint64_t longest = std::min<std::uint64_t>(j_max_, count_);
  std::uint64_t sum = 0;
  for (std::uint64_t len = 1; len <= longest; ++len) {
    sum += ring_[(e - len + 1) % j_max_];
    if (sum > g_max_) break;
    if (len >= min_length) ++dense[cell(static_cast<Gap>(sum), len, j_max_)];
  }
}

void StreamingCensus::push(Gap g) {
  if (head_.size() + 1 < j_max_) head_.push_back(g);
  ring_[count_ % j_max_] = g;
  ++count_;
  count_windows_ending_here(1, dense_);
}

CensusTable StreamingCensus::finish() const {
  if (count_ < j_max_) {
    throw InvalidInput("streamed cycle shorter than the census window length");
  }
  // Replay the first j_max-1 gaps past the end; only windows that start
  // inside the original cycle are counted.
  StreamingCensus tail = *this;
  const std::uint64_t n = count_;
  for (std::size_t i = 0; i < head_.size(); ++i) {
    tail.ring_[tail.count_ % j_max_] = head_[i];
    ++tail.count_;
    tail.count_windows_ending_here(tail.count_ - n + 1, tail.dense_);
  }
  return to_table(modulus_, g_max_, j_max_, tail.dense_);
}

std::uint64_t count_constellation(const GapCycle& cycle, const Constellation& s) {
  const auto g = cycle.gaps();
  const auto pat = s.gaps();
  const std::size_t n = g.size();
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t idx = i;
    bool match = true;
    for (Gap want : pat) {
      if (g[idx] != want) {
        match = false;
        break;
      }
      if (++idx == n) idx = 0;
    }
    if (match) ++hits;
  }
  return hits;
}

std::uint64_t count_driving_terms_of(const GapCycle& cycle, const Constellation& s) {
  const auto g = cycle.gaps();
  const auto pat = s.gaps();
  const std::size_t n = g.size();
  const std::size_t j = pat.size();
  std::vector<Gap> window(j + 1);
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t sum = 0;
    for (std::size_t t = 0; t <= j; ++t) {
      window[t] = g[(i + t) % n];
      sum += window[t];
    }
    if (sum != s.sum()) continue;
    for (std::size_t m = 0; m < j; ++m) {
      bool match = true;
      for (std::size_t t = 0; t < j && match; ++t) {
        Gap merged = t < m ? window[t] : t == m ? window[m] + window[m + 1] : window[t + 1];
        match = merged == pat[t];
      }
      if (match) ++hits;
    }
  }
  return hits;
}

std::uint64_t count_driving_terms(const GapCycle& cycle, Gap g) {
  const auto gaps = cycle.gaps();
  const std::size_t n = gaps.size();
  std::uint64_t hits = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::uint64_t sum = 0;
    std::size_t idx = s;
    while (sum < g) {
      sum += gaps[idx];
      if (++idx == n) idx = 0;
    }
    if (sum == g) ++hits;
  }
  return hits;
}

bool RecurrenceRow::holds() const {
  const auto j = static_cast<std::uint64_t>(s.size());
  return after == (next_prime - j - 1) * before + driving;
}

std::size_t RecurrenceReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.holds(); }));
}

namespace {

using WindowCounts = std::map<std::vector<Gap>, std::uint64_t>;

// Counts all cyclic windows of length <= max_len with sum < bound.
WindowCounts short_windows(std::span<const Gap> g, std::uint32_t max_len, std::uint64_t bound) {
  WindowCounts out;
  const std::size_t n = g.size();
  std::vector<Gap> w;
  for (std::size_t i = 0; i < n; ++i) {
    w.clear();
    std::uint64_t sum = 0;
    for (std::uint32_t len = 1; len <= max_len; ++len) {
      const Gap x = g[(i + len - 1) % n];
      sum += x;
      if (sum >= bound) break;
      w.push_back(x);
      ++out[w];
    }
  }
  return out;
}

}  // namespace

RecurrenceReport verify_constellation_recurrence(const GapCycle& base, std::uint32_t max_len, unsigned workers) {
  if (max_len == 0) throw InvalidInput("max_len must be at least 1");
  RecurrenceReport rep;
  rep.next_prime = next_prime(base);
  rep.stage_prime = base.sieve_stage();
  const std::uint64_t bound = 2 * rep.next_prime;
  const GapCycle next = extend_by_next_prime(base, workers);

  const WindowCounts before = short_windows(base.gaps(), max_len, bound);
  const WindowCounts after = short_windows(next.gaps(), max_len, bound);
  WindowCounts driving;
  for (const auto& [w, count] : short_windows(base.gaps(), max_len + 1, bound)) {
    if (w.size() < 2) continue;
    for (std::size_t m = 0; m + 1 < w.size(); ++m) {
      std::vector<Gap> merged(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(m));
      merged.push_back(w[m] + w[m + 1]);
      merged.insert(merged.end(), w.begin() + static_cast<std::ptrdiff_t>(m) + 2, w.end());
      driving[merged] += count;
    }
  }
  std::map<std::vector<Gap>, RecurrenceRow> rows;
  auto row = [&](const std::vector<Gap>& s) -> RecurrenceRow& {
    auto& r = rows[s];
    r.s = s;
    r.next_prime = rep.next_prime;
    return r;
  };
  for (const auto& [s, c] : before) row(s).before = c;
  for (const auto& [s, c] : after) row(s).after = c;
  for (const auto& [s, c] : driving) {
    if (s.size() <= max_len) row(s).driving = c;
  }
  for (auto& [s, r] : rows) rep.rows.push_back(std::move(r));
  return rep;
}

Rational RatioVector::sum() const {
  Rational total = 0;
  for (const auto& e : entries) total += e;
  return total;
}

RatioVector ratio_vector(const CensusTable& table, Gap g, std::uint32_t dimension) {
  if (g > table.g_max() || dimension == 0 || dimension > table.j_max()) {
    throw InvalidInput("ratio_vector: census does not cover g=" + std::to_string(g) + " up to length " +
                       std::to_string(dimension));
  }
  if (table.n2() == 0) throw InvalidInput("ratio_vector: N_2 is zero for this cycle");
  RatioVector w;
  w.g = g;
  w.basis_modulus = table.modulus();
  for (std::uint32_t j = 1; j <= dimension; ++j) w.entries.emplace_back(table.count(g, j), table.n2());
  return w;
}

namespace {

void track_runs(std::span<const Gap> g, MonotoneRun& inc, MonotoneRun& dec) {
  MonotoneRun up{0, 1}, down{0, 1};
  inc = up;
  dec = down;
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g[i] > g[i - 1]) {
      ++up.length;
    } else {
      up = {i, 1};
    }
    if (g[i] < g[i - 1]) {
      ++down.length;
    } else {
      down = {i, 1};
    }
    if (up.length > inc.length) inc = up;
    if (down.length > dec.length) dec = down;
  }
}

}  // namespace

SpikeReport max_gap_and_et_constellations(const GapCycle& cycle, std::uint32_t k, bool check_next_stage) {
  SpikeReport r;
  r.k = k;
  const auto g = cycle.gaps();
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Gap next = g[(i + 1) % n];
    if (g[i] == 2 && next > r.max_after_two) {
      r.max_after_two = next;
      r.two_position = i;
    }
    if (next == 2 && g[i] > r.max_before_two) r.max_before_two = g[i];
  }
  track_runs(g, r.longest_increasing, r.longest_decreasing);
  r.has_increasing_k = r.longest_increasing.length >= k;
  r.has_decreasing_k = r.longest_decreasing.length >= k;

  if (check_next_stage && cycle.is_primorial()) {
    Gap best = 0;
    Gap prev = 0;
    Gap first = 0;
    bool have_first = false;
    stream_extend(cycle, [&](Gap x) {
      if (!have_first) {
        first = x;
        have_first = true;
      }
      if (prev == 2 && x > best) best = x;
      prev = x;
      return true;
    });
    if (prev == 2 && first > best) best = first;
    r.next_stage_max_after_two = best;
  }
  return r;
}

}  // namespace gapsieve
