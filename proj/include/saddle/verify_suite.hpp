#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace saddle {

struct SuiteOutcome {
  std::string name;
  bool ok = false;
  std::string detail;
};

// Randomized invariant checks over every module, sized to finish in a few
// seconds. Deterministic for a given seed.
std::vector<SuiteOutcome> run_invariant_suites(std::uint64_t seed);

}  // namespace saddle
