#pragma once

#include <cstdint>

#include <json.hpp>

namespace tango {

struct SelfCheckOptions {
  std::uint64_t seed = 1;
  int rounds = 200;
};

struct SelfCheckResult {
  nlohmann::json report;  // deterministic for a fixed seed; no timings inside
  bool all_passed = false;
};

/// Seeded randomized property suite over the class arithmetic, the tower
/// steps, the cover algebra and the curve valuations. The report is
/// byte-stable across runs with the same seed and rounds.
SelfCheckResult run_self_checks(const SelfCheckOptions& options);

}  // namespace tango
