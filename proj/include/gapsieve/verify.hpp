#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gapsieve {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t max_prime = 19;  // largest primorial stage built
  unsigned workers = 1;
};

/// Runs the structural invariants over every stage up to max_prime: cycle
/// properties, twin counts, the constellation recurrence, model versus
/// census, eigenstructure, the closed Polignac counts and the survivors.
std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options);

}  // namespace gapsieve
