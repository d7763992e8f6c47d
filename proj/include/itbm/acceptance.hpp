#pragma once
// The quantitative checks the library must satisfy, run end to end at fixed
// sample sizes and thresholds. One result per criterion; `selfcheck` and the
// acceptance test binary both run this.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace itbm {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs every criterion (or the listed subset), logging one line each.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            unsigned workers, std::ostream& log,
                                            const std::vector<int>& only = {});

}  // namespace itbm
