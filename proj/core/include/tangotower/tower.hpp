#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tangotower/tower_class.hpp"

namespace tango {

/// Certification level of the polarization's justification.
///   Tango:    a justification eta with (d eta) = p D is certified.
///   PreTango: only (d eta) >= p D is certified (or nothing is, after a
///             Frobenius-degree cover step, which propagates no certificate).
enum class TangoFlag { Tango, PreTango };

std::string to_string(TangoFlag flag);

struct StepRecord {
  enum class Kind { I, II };
  Kind kind = Kind::I;
  long k = 0;          // cover degree
  long ell = 0;        // kind II: k = p^ell * r
  long r = 0;          // kind II: gcd(p, r) = 1
  TowerClass d_prime;  // the D' used, at the pre-step level
  TowerClass g_tilde;  // class of G~ on the new stage (level + 1)
  Rat f_pullback_multiplier;  // phi*F = multiplier * F~ : k for I, k/p for II
};

std::string to_string(StepRecord::Kind kind);

/// A polarized stage of the inductive construction.
///
/// `canonical` is the canonical class K of the stage, updated per step by the
/// ramification formula. `differential` is the class of (d eta) for the
/// certified justification; on the base curve it coincides with K, but from
/// dimension 2 on the two drift apart (the canonical class picks up the
/// -(k+1)F~ + k f*D' general-type gap while the justification keeps the exact
/// relation (d eta) = p D + slack). Degree-k covers with p | k propagate no
/// justification, so `differential` becomes empty after such a step.
class TowerState {
public:
  TowerState(long p, int base_dim, TowerClass canonical, TowerClass polarization,
             std::optional<TowerClass> differential, TangoFlag tango,
             std::vector<StepRecord> steps);

  long p() const { return p_; }
  int base_dim() const { return base_dim_; }
  int level() const { return canonical_.level(); }
  int dim() const { return base_dim_ + level(); }
  const TowerClass& canonical() const { return canonical_; }
  const TowerClass& polarization() const { return polarization_; }
  const std::optional<TowerClass>& differential() const { return differential_; }
  TangoFlag tango() const { return tango_; }
  const std::vector<StepRecord>& steps() const { return steps_; }

  /// Slack of the certified justification: differential - p * polarization.
  /// Equals e*E pulled up from the base for every state reached by
  /// coprime-degree steps.
  std::optional<TowerClass> justification_slack() const;

private:
  long p_;
  int base_dim_;
  TowerClass canonical_;
  TowerClass polarization_;
  std::optional<TowerClass> differential_;
  TangoFlag tango_;
  std::vector<StepRecord> steps_;
};

/// Base of a tower: a curve with a Tango structure of degree degD, intended
/// first cover degree k1. Requires k1 | degD and gcd(p, k1) = 1. On a curve
/// the Tango equality reads K = (d eta) = p D, so canonical = p*polarization.
TowerState base_from_tango_curve(long p, long degD, long k1);

/// Pre-Tango variant: (d eta) = p D + slack_e * E with slack_e >= 0, so the
/// curve's canonical class is p*polarization + slack_e * E.
TowerState base_from_pre_tango_curve(long p, long degD, long k1, long slack_e);

/// A hypothetical polarized variety of dimension `dim` entered directly at
/// lattice level 0 (its own Picard group tracked by degree only). Used to
/// probe the construction on inputs it cannot itself produce.
TowerState synthetic_base(long p, int dim, const Rat& canonical_d, const Rat& polarization_d,
                          TangoFlag tango, long slack_e = 0);

/// One coprime-degree cover step: gcd(p,k) = 1, k >= 2, D = k D' integrally.
///   K~ = (pk - p - k - 1) F~ + f*(K - (pk - p - k) D')
///   D~ = (k - 1) F~ + f*(D')
/// The justification transforms as (d eta~) = p D~ + f*((d eta) - p D), so
/// Tango stays Tango and pre-Tango slack pulls back unchanged.
TowerState step_I(const TowerState& s, long k);

/// One Frobenius-degree cover step: k = p^ell * r with ell >= 1, gcd(p,r)=1.
///   K~ = (p^ell r - p^(ell-1) r - 2) F~ + f*(K + (p^ell r - p(p^ell r - 1)) D')
/// phi*F = (k/p) F~ and G~ = F~ - p f*(D'); no justification is certified for
/// the new stage, so the flag drops to PreTango and `differential` clears.
TowerState step_II(const TowerState& s, long ell, long r);

struct CanonicalClassification {
  TrivialityReport report;
  std::vector<StepRecord> history;
  bool trivial() const { return report.trivial; }
};

/// Triviality of the canonical class, with the step history attached for
/// certificate assembly.
CanonicalClassification classify_canonical(const TowerState& s);

/// Runs a JSON build script:
///   {"p": 3, "base": {"degD": 2, "k1": 2, "tango": true},
///    "steps": [{"kind": "I", "k": 2}, {"kind": "II", "l": 1, "r": 1}]}
/// A synthetic base uses {"dim": 2, "canonical_d": "1", "polarization_d": "3",
/// "tango": false} instead. Unknown fields are rejected; a failing step
/// reports its index.
TowerState run_build_script(const nlohmann::json& script);

nlohmann::json to_json(const StepRecord& r);
nlohmann::json to_json(const TowerState& s);

}  // namespace tango
