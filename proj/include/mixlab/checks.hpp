#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mixlab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs the built-in structural identities and inequalities on seeded
// synthetic fixtures: product contraction, target invariance and
// monotonicity, set-process mass preservation and duality, the one-step
// functional inequalities, the certified-bound implication, and the
// closed-form calculator arithmetic.
std::vector<CheckResult> run_self_checks(std::uint64_t seed);

}  // namespace mixlab
