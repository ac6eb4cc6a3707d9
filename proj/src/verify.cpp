#include "gapsieve/verify.hpp"

#include <map>
#include <sstream>

#include "gapsieve/census.hpp"
#include "gapsieve/cycle.hpp"
#include "gapsieve/dynamics.hpp"
#include "gapsieve/polignac.hpp"
#include "gapsieve/primes_bridge.hpp"

namespace gapsieve {

namespace {

template <class... Parts>
std::string cat(const Parts&... parts) {
  std::ostringstream s;
  (s << ... << parts);
  return s.str();
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const SuiteOptions& opt) {
  std::vector<CheckResult> out;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };

  std::map<std::uint64_t, GapCycle> stages;
  GapCycle cur = GapCycle::seed();
  stages.emplace(2, cur);
  while (next_prime(cur) <= opt.max_prime) {
    cur = extend_by_next_prime(cur, opt.workers);
    stages.emplace(cur.sieve_stage(), cur);
  }

  const Constellation two({2}), four({4});
  for (const auto& [p, c] : stages) {
    if (p < 3) continue;
    const auto rep = verify_remark_properties(c);
    std::string failed;
    for (const auto& chk : rep.checks) {
      if (chk.applicable && !chk.passed) failed += chk.name + " ";
    }
    add(cat("cycle properties G(", p, "#)"), rep.all_passed(), failed);

    BigInt expect = 1;
    for (auto q : primes_in(3, p)) expect *= q - 2;
    const auto n2 = count_constellation(c, two), n4 = count_constellation(c, four);
    add(cat("N_2 = prod(q-2) and N_2 = N_4 at ", p, "#"), BigInt(n2) == expect && n2 == n4,
        cat("N_2=", n2, " N_4=", n4, " expected ", expect));
  }

  for (const auto& [p, c] : stages) {
    if (p < 5 || next_prime(c) > opt.max_prime) continue;
    std::vector<Gap> streamed;
    stream_extend(c, [&](Gap g) {
      streamed.push_back(g);
      return true;
    });
    const auto& next = stages.at(next_prime(c));
    add(cat("streamed G(", next_prime(c), "#) equals materialized"), std::ranges::equal(streamed, next.gaps()));
  }

  for (std::uint64_t p : {5, 7, 11, 13}) {
    if (next_prime_after(p) > opt.max_prime) continue;
    const auto rep = verify_constellation_recurrence(stages.at(p), 4, opt.workers);
    add(cat("constellation recurrence ", p, "# -> ", rep.next_prime, "#"), rep.failures() == 0,
        cat(rep.rows.size(), " constellations, ", rep.failures(), " failures"));
  }

  if (opt.max_prime >= 7) {
    const auto base = driving_term_census(stages.at(5), 10, 3);
    for (Gap g : {6, 8, 10}) {
      const auto w0 = ratio_vector(base, g, 3);
      bool ok = true;
      for (const auto& [p, c] : stages) {
        if (p <= 5) continue;
        const auto model = iterate_model(w0, 5, p, 3);
        const auto census = ratio_vector(driving_term_census(c, g, 3, {opt.workers}), g, 3);
        ok = ok && model.entries == census.entries;
      }
      add(cat("model equals census for g=", g, " from 5#"), ok);
    }
  }

  {
    bool ok = true;
    for (std::uint32_t J = 1; J <= 12; ++J) {
      const auto e = eigenstructure(J);
      ok = ok && e.inverse_pair();
      for (std::uint64_t p : {13, 17, 101, 997}) ok = ok && e.reproduces(p);
    }
    add("eigenstructure identities J<=12", ok);
  }

  for (const auto& [p, c] : stages) {
    if (p < 13) continue;
    const auto n2 = count_constellation(c, two);
    bool ok = true;
    for (Gap g = 2; g <= 120; g += 2) {
      ok = ok && Rational(count_driving_terms(c, g), n2) == ratio_sum_at(g, p);
    }
    add(cat("ratio sums at ", p, "# for g<=120"), ok);
  }
  {
    bool ok = true;
    std::string detail;
    for (Gap g = 2; g <= 50; g += 2) {
      const auto r = radical(g);
      if (r.qbar > 13 || !stages.contains(r.qbar)) continue;
      if (BigInt(count_driving_terms(stages.at(r.qbar), g)) != driving_term_total(g)) {
        ok = false;
        detail += cat("g=", g, " ");
      }
    }
    add("closed driving-term totals for g<=50", ok, detail);
  }

  for (const auto& [p, c] : stages) {
    if (p < 3) continue;
    const auto s = survivors(c);
    add(cat("survivors of G(", p, "#) are prime gaps"), s.all_matched(), cat(s.gaps.size(), " gaps"));
  }

  if (opt.workers > 1) {
    const auto& big = stages.rbegin()->second;
    add("census independent of worker count",
        driving_term_census(big, 32, 9, {1}) == driving_term_census(big, 32, 9, {opt.workers}));
  }
  return out;
}

}  // namespace gapsieve
