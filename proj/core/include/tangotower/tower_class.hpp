#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tangotower/rational.hpp"

namespace tango {

/// A divisor class in the lattice of an iterated cyclic-cover tower.
///
/// The Picard group of each stage decomposes as Z[F~] (+) f*Pic of the stage
/// below; iterating down to the base curve, a class is a coordinate vector
///
///     e * E  +  d * D'_1  +  f_1 * F~_1 + ... + f_level * F~_level
///
/// where D'_1 is the degree-normalized base generator (deg D'_1 = 1), E is
/// the formal effective slack class carried by a pre-Tango justification,
/// and F~_i is the canonical-section class introduced by the i-th cover.
/// Coefficients are exact rationals; values are immutable once built.
class TowerClass {
public:
  /// Zero class at the base (level 0).
  TowerClass() : e_(0), d_(0) {}

  TowerClass(Rat e, Rat d, std::vector<Rat> f)
      : e_(std::move(e)), d_(std::move(d)), f_(std::move(f)) {}

  static TowerClass zero(int level);
  /// Base-level class e*E + d*D'_1.
  static TowerClass base(Rat e, Rat d);
  /// Base-level class d*D'_1.
  static TowerClass base_degree(Rat d) { return base(Rat(0), std::move(d)); }

  int level() const { return static_cast<int>(f_.size()); }
  const Rat& e() const { return e_; }
  const Rat& d() const { return d_; }
  std::span<const Rat> f() const { return f_; }
  /// Coefficient of F~_i (1-based, i in [1, level]).
  const Rat& f(int i) const { return f_.at(static_cast<std::size_t>(i - 1)); }

  bool is_zero() const;

  friend bool operator==(const TowerClass& a, const TowerClass& b) {
    return a.e_ == b.e_ && a.d_ == b.d_ && a.f_ == b.f_;
  }

private:
  Rat e_;
  Rat d_;
  std::vector<Rat> f_;
};

/// Componentwise sum. Throws LevelMismatchError naming both levels.
TowerClass add(const TowerClass& a, const TowerClass& b);
TowerClass sub(const TowerClass& a, const TowerClass& b);
TowerClass negate(const TowerClass& c);
TowerClass scale(const Rat& q, const TowerClass& c);

/// Coordinate embedding along f*: one level up, new F~ coefficient zero.
TowerClass pullback(const TowerClass& c);

inline TowerClass operator+(const TowerClass& a, const TowerClass& b) { return add(a, b); }
inline TowerClass operator-(const TowerClass& a, const TowerClass& b) { return sub(a, b); }
inline TowerClass operator-(const TowerClass& c) { return negate(c); }
inline TowerClass operator*(const Rat& q, const TowerClass& c) { return scale(q, c); }
inline TowerClass operator*(long n, const TowerClass& c) { return scale(Rat(n), c); }

enum class DivisionMode {
  /// Every coefficient must be an integer divisible by k.
  Integral,
  /// Unconditional scaling by 1/k.
  Rational,
};

struct DivisionFailure {
  std::string coordinate;  // "e", "d", "f1", ...
  Rat value;
  long divisor = 0;
  std::string message() const;
};

struct DivisionResult {
  std::optional<TowerClass> cls;
  std::optional<DivisionFailure> failure;
  bool ok() const { return cls.has_value(); }
  /// Unwraps the quotient; throws DivisionError when the division failed.
  const TowerClass& value() const;
};

/// Division by k >= 1. In Integral mode this is the lattice-level stand-in
/// for dividing a base divisor inside Pic: it succeeds exactly when every
/// coordinate is an integer multiple of k. Rational mode always succeeds.
DivisionResult divide_exact(const TowerClass& c, long k,
                            DivisionMode mode = DivisionMode::Integral);

struct TrivialityReport {
  bool trivial = false;
  /// Names of the nonzero coordinates, in e, d, f1.. order.
  std::vector<std::string> witnesses;
  /// Set when e != 0: triviality would force the effective slack class E to
  /// be numerically trivial, contradicting it being effective and nonzero.
  bool effective_slack_obstruction = false;
};

TrivialityReport is_trivial(const TowerClass& c);

/// {"level": n, "e": "p/q", "d": "p/q", "f": ["p/q", ...]} with canonical
/// lowest-terms rational strings.
nlohmann::json to_json(const TowerClass& c);
TowerClass tower_class_from_json(const nlohmann::json& j);

std::string to_string(const TowerClass& c);

}  // namespace tango
