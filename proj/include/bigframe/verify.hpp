#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bigframe/types.hpp"

namespace bigframe {

struct SuiteResult {
  std::string theorem;
  int total = 0;
  int failed = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> failing_seeds;
  std::vector<std::string> notes;

  bool passed() const { return failed == 0; }
};

/// The theorem tags `verify` accepts, in display order.
const std::vector<std::string>& theorem_tags();

/// Runs the named theorem's property suite over `instances` seeded trials.
/// Trial seeds are derived from (seed, index) so results are reproducible
/// and order-independent. Throws SpecInvalid for unknown tags.
SuiteResult run_theorem_suite(const std::string& tag, int instances,
                              std::uint64_t seed);

}  // namespace bigframe
