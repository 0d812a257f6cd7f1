#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tangotower/rational.hpp"
#include "tangotower/tower_class.hpp"

namespace tango {

/// One re-checkable derivation step. The payload carries both sides exactly
/// (rational strings or full divisor-class coordinates), so replaying needs
/// nothing beyond the class arithmetic itself.
struct TraceStep {
  /// "equation"          data: lhs, rhs rational strings; holds <=> lhs == rhs
  /// "degree-inequality" data: lhs, rhs rational strings; holds <=> lhs >= rhs
  /// "integrality"       data: value rational string; holds <=> integer
  /// "gcd"               data: a, b integers; holds <=> gcd(a, b) == 1
  /// "class-equation"    data: lhs_class, rhs_class; holds <=> zero residual
  /// "note"              data: free-form; always holds
  std::string kind;
  std::string description;
  nlohmann::json data;
  bool holds = true;
};

struct Certificate {
  std::string claim;
  nlohmann::json bounds = nlohmann::json::object();
  nlohmann::json solutions = nlohmann::json::array();
  std::vector<TraceStep> trace;
  std::string verdict;  // "Impossible" | "ConditionallyPossible" | "SolutionsFound"
  nlohmann::json conditions = nlohmann::json::array();

  nlohmann::json to_json() const;
  static Certificate from_json(const nlohmann::json& j);
};

/// Re-evaluates every trace step with exact arithmetic and compares with the
/// recorded truth value. Returns false on the first divergence.
bool replay_certificate(const Certificate& cert);

/// Replays a single step; exposed for tests.
bool replay_step(const TraceStep& step);

}  // namespace tango
