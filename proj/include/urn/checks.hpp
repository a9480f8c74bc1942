#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace urn {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// The invariant suite behind `opinion-urn verify`. `quick` shrinks every
/// sample size so the whole suite runs in about a second.
std::vector<CheckResult> run_verification(bool quick, std::uint64_t seed);

}  // namespace urn
