#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tumorpinn {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast self-checks of the derivative engine, the residual algebra and the
/// forward solver. Backs the `validate` subcommand.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed);

}  // namespace tumorpinn
