#include "gapsieve/cycle.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <limits>
#include <numeric>
#include <thread>

#include "gapsieve/errors.hpp"

namespace gapsieve {

GapCycle::GapCycle(std::uint64_t modulus, std::vector<Gap> gaps) : modulus_(modulus), gaps_(std::move(gaps)) {
  if (gaps_.empty()) throw InvalidInput("cycle of gaps must be nonempty");
  std::uint64_t sum = 0;
  for (Gap g : gaps_) {
    if (g == 0) throw InvalidInput("gaps must be positive");
    sum = checked_add(sum, g, "cycle sum");
  }
  if (sum != modulus_) {
    throw InvalidInput("gaps sum to " + std::to_string(sum) + ", expected modulus " + std::to_string(modulus_));
  }
  stage_ = primorial_stage(modulus_);
}

GapCycle GapCycle::seed() { return GapCycle(2, {2}); }

std::uint64_t GapCycle::generator(std::size_t j) const {
  std::uint64_t acc = 1;
  for (std::size_t i = 0; i < j; ++i) acc += gaps_[i % gaps_.size()];
  return acc;
}

std::uint64_t next_prime(const GapCycle& cycle) {
  if (!cycle.is_primorial()) {
    throw InvalidInput("next_prime: modulus " + std::to_string(cycle.modulus()) + " is not a primorial");
  }
  return static_cast<std::uint64_t>(cycle[0]) + 1;
}

namespace {

// One worker's share of the q copies: merged gaps plus the unfinished tail
// that has to be glued onto the next share.
struct Piece {
  std::vector<Gap> gaps;
  std::uint64_t tail = 0;
};

Gap narrow(std::uint64_t v) {
  if (v > std::numeric_limits<Gap>::max()) throw OverflowError("merged gap exceeds 32 bits");
  return static_cast<Gap>(v);
}

// Walks copies [first, last) of the concatenation. Closures are found with
// running sums of q*g_m, started from the first multiple q*gamma beyond the
// share's starting candidate.
Piece walk_copies(std::span<const Gap> g, std::uint64_t n, std::uint64_t q, std::uint64_t first,
                  std::uint64_t last) {
  const std::size_t phi = g.size();

  // Smallest unrolled generator gamma = t*N + P[m] with q*gamma >= first*N + 2.
  const std::uint64_t target = (first * n + 2 + q - 1) / q;
  std::uint64_t t = (target - 1) / n;
  const std::uint64_t r = target - t * n;
  std::size_t m = 0;
  std::uint64_t gen = 1;
  while (gen < r) {
    gen += g[m];
    ++m;
    if (m == phi) {
      m = 0;
      gen = 1;
      ++t;
      break;
    }
  }
  std::uint64_t next_closure = q * (t * n + gen);

  Piece piece;
  piece.gaps.reserve(static_cast<std::size_t>((last - first) * phi));
  std::uint64_t cand = first * n + 1;
  std::uint64_t acc = 0;
  for (std::uint64_t c = first; c < last; ++c) {
    for (std::size_t k = 0; k < phi; ++k) {
      acc += g[k];
      cand += g[k];
      if (cand == next_closure) {
        next_closure += q * g[m];
        if (++m == phi) m = 0;
        continue;
      }
      piece.gaps.push_back(narrow(acc));
      acc = 0;
    }
  }
  piece.tail = acc;
  return piece;
}

}  // namespace

GapCycle extend_general(const GapCycle& cycle, std::uint64_t q, unsigned workers) {
  if (!is_prime(q)) throw InvalidInput("extend_general: " + std::to_string(q) + " is not prime");
  const std::uint64_t n = cycle.modulus();
  const std::uint64_t qn = checked_mul(q, n, "extend_general modulus");
  checked_add(qn, 1, "extend_general modulus");
  const std::uint64_t out_len = extended_length(n, cycle.size(), q);
  if (out_len > std::numeric_limits<std::size_t>::max() / sizeof(Gap)) {
    throw ResourceError("extend_general: output does not fit in memory");
  }

  const auto src = cycle.gaps();
  std::vector<Gap> out;
  out.reserve(static_cast<std::size_t>(out_len));

  if (n % q == 0) {
    for (std::uint64_t c = 0; c < q; ++c) out.insert(out.end(), src.begin(), src.end());
    return GapCycle(qn, std::move(out));
  }

  const std::uint64_t shares = std::clamp<std::uint64_t>(workers, 1, q);
  std::vector<Piece> pieces(shares);
  auto bounds = [&](std::uint64_t i) { return q * i / shares; };
  if (shares == 1) {
    pieces[0] = walk_copies(src, n, q, 0, q);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(shares);
    std::vector<std::exception_ptr> errors(shares);
    for (std::uint64_t i = 0; i < shares; ++i) {
      threads.emplace_back([&, i] {
        try {
          pieces[i] = walk_copies(src, n, q, bounds(i), bounds(i + 1));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::uint64_t carry = 0;
  for (auto& piece : pieces) {
    if (piece.gaps.empty()) {
      carry += piece.tail;
      continue;
    }
    out.push_back(narrow(piece.gaps.front() + carry));
    out.insert(out.end(), piece.gaps.begin() + 1, piece.gaps.end());
    std::vector<Gap>().swap(piece.gaps);
    carry = piece.tail;
  }
  if (carry != 0) throw std::logic_error("extend_general: closure at qN+1");
  if (out.size() != out_len) throw std::logic_error("extend_general: closure count mismatch");
  return GapCycle(qn, std::move(out));
}

GapCycle extend_by_next_prime(const GapCycle& cycle, unsigned workers) {
  return extend_general(cycle, next_prime(cycle), workers);
}

GapCycle primorial_cycle(std::uint64_t p, unsigned workers) {
  if (p < 2) throw InvalidInput("primorial_cycle: p must be at least 2");
  GapCycle c = GapCycle::seed();
  while (c.sieve_stage() < p) {
    if (next_prime(c) > p) break;
    c = extend_by_next_prime(c, workers);
  }
  return c;
}

ClosurePlan closure_plan(const GapCycle& cycle, std::uint64_t q) {
  const std::uint64_t n = cycle.modulus();
  if (!is_prime(q)) throw InvalidInput("closure_plan: " + std::to_string(q) + " is not prime");
  if (n % q == 0) throw InvalidInput("closure_plan: q divides N; extension is pure concatenation");
  const std::uint64_t qn = checked_mul(q, n, "closure_plan modulus");

  ClosurePlan plan;
  plan.prime = q;
  plan.source_modulus = n;
  plan.closures.reserve(cycle.size());

  const auto g = cycle.gaps();
  const std::size_t phi = g.size();
  std::size_t m = 0;
  std::uint64_t next_closure = q;
  std::uint64_t cand = 1;
  std::uint64_t pos = 0;
  for (std::uint64_t c = 0; c < q; ++c) {
    for (std::size_t k = 0; k < phi; ++k, ++pos) {
      cand += g[k];
      if (cand == next_closure) {
        plan.closures.push_back({pos, cand});
        next_closure += q * g[m];
        ++m;
      }
    }
  }
  for (std::size_t i = 0; i + 1 < plan.closures.size(); ++i) {
    plan.distances.push_back(plan.closures[i + 1].value - plan.closures[i].value);
  }
  if (!plan.closures.empty()) {
    const std::uint64_t wrap = plan.closures.front().value + qn - plan.closures.back().value;
    plan.distances.push_back(wrap);
    plan.wrap_flag = plan.closures.back().value + wrap > qn;
  }
  return plan;
}

GapCycle apply_closure_plan(const GapCycle& cycle, const ClosurePlan& plan) {
  if (plan.source_modulus != cycle.modulus()) throw InvalidInput("closure plan built for a different modulus");
  const auto g = cycle.gaps();
  std::vector<Gap> out;
  out.reserve(g.size() * static_cast<std::size_t>(plan.prime - 1));
  auto it = plan.closures.begin();
  std::uint64_t acc = 0;
  std::uint64_t pos = 0;
  for (std::uint64_t c = 0; c < plan.prime; ++c) {
    for (Gap gap : g) {
      acc += gap;
      if (it != plan.closures.end() && it->position == pos) {
        ++it;
      } else {
        out.push_back(narrow(acc));
        acc = 0;
      }
      ++pos;
    }
  }
  if (acc != 0 || it != plan.closures.end()) throw InvalidInput("closure plan does not fit the concatenation");
  return GapCycle(checked_mul(plan.prime, cycle.modulus(), "apply_closure_plan"), std::move(out));
}

bool RemarkReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return !c.applicable || c.passed; });
}

const PropertyCheck* RemarkReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<Gap> expected_middle_constellation(std::uint64_t next_prime) {
  unsigned j = 1;
  while ((std::uint64_t{1} << (j + 1)) <= next_prime) ++j;
  std::vector<Gap> out;
  for (unsigned i = j; i >= 1; --i) out.push_back(Gap{1} << i);
  out.push_back(4);
  for (unsigned i = 1; i <= j; ++i) out.push_back(Gap{1} << i);
  return out;
}

RemarkReport verify_remark_properties(const GapCycle& cycle) {
  RemarkReport report;
  const auto g = cycle.gaps();
  const std::size_t phi = g.size();
  const std::uint64_t n = cycle.modulus();

  {
    std::uint64_t expected = 1;
    if (cycle.is_primorial()) {
      for (auto p : primes_in(2, cycle.sieve_stage())) expected *= p - 1;
    } else {
      expected = totient(n);
    }
    report.checks.push_back({"length", true, phi == expected,
                             "length " + std::to_string(phi) + ", totient " + std::to_string(expected)});
  }
  {
    std::uint64_t sum = std::accumulate(g.begin(), g.end(), std::uint64_t{0});
    report.checks.push_back({"sum", true, sum == n, "sum " + std::to_string(sum)});
  }
  report.checks.push_back({"last_gap", n > 2, g.back() == 2, "last gap " + std::to_string(g.back())});
  {
    bool sym = true;
    std::size_t bad = 0;
    for (std::size_t j = 0; j + 2 <= phi; ++j) {
      if (g[j] != g[phi - 2 - j]) {
        sym = false;
        bad = j;
        break;
      }
    }
    report.checks.push_back({"symmetry", n > 2, sym, sym ? "" : "mismatch at index " + std::to_string(bad)});
  }
  if (cycle.is_primorial()) {
    const std::uint64_t p_next = next_prime(cycle);
    report.checks.push_back({"first_gap", true, is_prime(p_next) && p_next == next_prime_after(cycle.sieve_stage()),
                             "first gap " + std::to_string(g[0])});

    const auto pattern = expected_middle_constellation(p_next);
    const bool fits = n > 2 && phi >= 2 && pattern.size() / 2 <= phi / 2 - 1;
    bool ok = fits;
    if (fits) {
      const std::size_t center = phi / 2 - 1;
      const std::size_t start = center - pattern.size() / 2;
      ok = std::equal(pattern.begin(), pattern.end(), g.begin() + static_cast<std::ptrdiff_t>(start));
    }
    report.checks.push_back({"middle_constellation", fits, ok,
                             "pattern of " + std::to_string(pattern.size()) + " gaps around index " +
                                 std::to_string(phi / 2 - 1)});
  } else {
    report.checks.push_back({"first_gap", false, true, "not a primorial cycle"});
    report.checks.push_back({"middle_constellation", false, true, "not a primorial cycle"});
  }
  return report;
}

DoubleGapReport find_double_gap_2pk(const GapCycle& cycle, std::uint64_t pk) {
  DoubleGapReport report;
  report.target = narrow(2 * pk);
  const auto g = cycle.gaps();
  const std::size_t phi = g.size();
  for (std::size_t i = 0; i < phi; ++i) {
    if (g[i] == report.target) report.positions.push_back(i);
  }
  for (std::size_t i : report.positions) {
    if (i + 2 > phi) continue;
    const std::size_t mirror = phi - 2 - i;
    if (mirror != i && g[mirror] == report.target) {
      report.symmetric_pair = std::make_pair(std::min(i, mirror), std::max(i, mirror));
      break;
    }
  }
  return report;
}

}  // namespace gapsieve
