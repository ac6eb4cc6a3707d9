#include "gapsieve/primes_bridge.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "gapsieve/errors.hpp"
#include "gapsieve/prime_sieve.hpp"

namespace gapsieve {

bool SurvivorReport::all_matched() const {
  return gaps.size() == oracle_count && std::all_of(matched.begin(), matched.end(), [](bool b) { return b; });
}

std::vector<Gap> prime_gap_oracle(std::uint64_t limit, std::uint64_t max_bytes) {
  return prime_gaps_upto(limit, max_bytes);
}

SurvivorReport survivors(const GapCycle& cycle) {
  SurvivorReport r;
  r.next_prime = next_prime(cycle);
  r.stage_prime = cycle.modulus() == 2 ? 2 : prev_prime_before(r.next_prime);
  const std::uint64_t square = checked_mul(r.next_prime, r.next_prime, "survivor bound");
  const auto g = cycle.gaps();
  std::uint64_t value = r.next_prime;
  for (std::size_t i = 1 % g.size();; i = (i + 1) % g.size()) {
    if (value + g[i] >= square) break;
    value += g[i];
    r.gaps.push_back(g[i]);
  }
  r.last_value = value;

  std::vector<std::uint64_t> primes;
  for_each_prime(r.next_prime, square - 1, [&](std::uint64_t p) { primes.push_back(p); });
  r.oracle_count = primes.empty() ? 0 : primes.size() - 1;
  for (std::size_t i = 0; i < r.gaps.size(); ++i) {
    r.matched.push_back(i + 1 < primes.size() && primes[i + 1] - primes[i] == r.gaps[i]);
  }
  return r;
}

namespace {

std::vector<Gap> diffs(const std::vector<std::uint64_t>& v) {
  std::vector<Gap> out;
  for (std::size_t i = 1; i < v.size(); ++i) out.push_back(static_cast<Gap>(v[i] - v[i - 1]));
  return out;
}

}  // namespace

std::vector<Gap> TraceStage::gaps() const { return diffs(values); }

std::vector<std::vector<Gap>> TraceStage::bold_runs() const {
  std::vector<std::vector<Gap>> runs;
  bool open = false;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (!bold[i]) {
      open = false;
      continue;
    }
    if (!open) runs.emplace_back();
    open = true;
    runs.back().push_back(static_cast<Gap>(values[i + 1] - values[i]));
  }
  return runs;
}

std::vector<Gap> ClosureTrace::final_gaps() const { return diffs(final_values); }

ClosureTrace closure_trace(const GapCycle& cycle, std::uint64_t up_to_prime) {
  ClosureTrace t;
  t.next_prime = next_prime(cycle);
  t.stage_prime = cycle.modulus() == 2 ? 2 : prev_prime_before(t.next_prime);
  t.segment_end = cycle.modulus() + 1;

  std::vector<std::uint64_t> values{1};
  for (Gap g : cycle.gaps()) values.push_back(values.back() + g);

  for (std::uint64_t p = t.next_prime; p <= up_to_prime; p = next_prime_after(p)) {
    TraceStage s;
    s.prime = p;
    for (std::uint64_t c : values) {
      if (c > t.segment_end / p) break;
      s.closures.push_back(p * c);
    }
    for (std::size_t i = 1; i < s.closures.size(); ++i) s.distances.push_back(s.closures[i] - s.closures[i - 1]);

    const std::uint64_t p_next = next_prime_after(p);
    auto closed = [&](std::uint64_t v) { return std::binary_search(s.closures.begin(), s.closures.end(), v); };
    s.bold.resize(values.size() > 0 ? values.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const std::uint64_t a = values[i], b = values[i + 1];
      s.bold[i] = a >= p && b < p * p_next && !(closed(a) && a != p) && !closed(b);
    }
    s.values = values;
    std::erase_if(values, closed);
    t.stages.push_back(std::move(s));
  }
  t.final_values = std::move(values);
  return t;
}

std::string render_trace_text(const ClosureTrace& t) {
  std::ostringstream out;
  out << "G(" << t.stage_prime << "#) segment 1.." << t.segment_end << '\n';
  for (const auto& s : t.stages) {
    out << "(p=" << s.prime << ") =>";
    const auto gaps = s.gaps();
    std::size_t next_closure = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      if (s.bold[i]) {
        out << " *" << gaps[i] << '*';
      } else {
        out << ' ' << gaps[i];
      }
      const std::uint64_t end = s.values[i + 1];
      if (next_closure < s.closures.size() && end == s.closures[next_closure]) {
        out << " +";
        if (next_closure < s.distances.size()) out << " [" << s.distances[next_closure] << "]";
        ++next_closure;
      }
    }
    out << '\n';
    out << "  closures:";
    for (auto c : s.closures) out << ' ' << c;
    out << '\n';
  }
  return out.str();
}

std::string render_trace_json(const ClosureTrace& t) {
  nlohmann::json j;
  j["stage_prime"] = t.stage_prime;
  j["next_prime"] = t.next_prime;
  j["segment_end"] = t.segment_end;
  j["stages"] = nlohmann::json::array();
  for (const auto& s : t.stages) {
    j["stages"].push_back({{"prime", s.prime},
                           {"gaps", s.gaps()},
                           {"bold", s.bold},
                           {"closures", s.closures},
                           {"distances", s.distances},
                           {"bold_runs", s.bold_runs()}});
  }
  j["final_gaps"] = t.final_gaps();
  return j.dump(1);
}

}  // namespace gapsieve
