#pragma once

#include <vector>

#include <json.hpp>

#include "tangotower/rational.hpp"
#include "tangotower/tower_class.hpp"

namespace tango {

/// A divisor class a*F + pi*(base) on the P^1-bundle P = P(E) -> X, where F
/// is the canonical section (the O_P(1) twist) and base lives in the tower
/// lattice of X. The inseparable-cover divisor G is never stored as a
/// generator; it is always eliminated through its linear-equivalence class.
struct PBundleClass {
  Rat a;            // coefficient of F
  TowerClass base;  // pi*-pulled class on X

  friend bool operator==(const PBundleClass& x, const PBundleClass& y) {
    return x.a == y.a && x.base == y.base;
  }
};

PBundleClass add(const PBundleClass& x, const PBundleClass& y);
PBundleClass sub(const PBundleClass& x, const PBundleClass& y);
PBundleClass scale(const Rat& q, const PBundleClass& x);
bool is_zero(const PBundleClass& x);

inline PBundleClass operator+(const PBundleClass& x, const PBundleClass& y) { return add(x, y); }
inline PBundleClass operator-(const PBundleClass& x, const PBundleClass& y) { return sub(x, y); }
inline PBundleClass operator*(const Rat& q, const PBundleClass& x) { return scale(q, x); }

/// Summands of the (normalized) cyclic-cover algebra, index i = 0..k-1.
using SummandList = std::vector<PBundleClass>;

/// Class of the purely inseparable cover divisor: O_P(G) = O_P(pF - p pi*D).
PBundleClass g_class(long p, const TowerClass& D);

/// Canonical class of the bundle: K_P = -2F + pi*(K + k D').
PBundleClass canonical_of_P(const TowerClass& K, long k, const TowerClass& d_prime);

/// The cover sheaf M = O_P(-((p+m)/k) F) (x) pi* O_X(p D').
/// Requires k | (p+m) and gcd(p,k) = 1.
PBundleClass cover_sheaf_class(long p, long k, long m, const TowerClass& d_prime);

/// Least m >= 1 with k | (p+m); the smooth case is m = 1 (k | p+1).
long least_ramification_multiplier(long p, long k);

/// Summands M^i (x) O_P([ i(mF+G)/k ]) of the normalized k-th cyclic cover
/// ramified over mF + G. The bracket is the integral part taken on the prime
/// divisors F and G before G is eliminated via g_class; for i < k the G part
/// always floors to zero.
SummandList cyclic_cover_summands(long p, long k, long m, const TowerClass& d_prime);

struct RelationCheck {
  bool ok = false;
  PBundleClass residual;  // k*M - (-mF - G); zero when the relation holds
};

/// Checks M^(x)k == O_P(-mF) (x) O_P(-G) exactly in class coordinates.
RelationCheck verify_mk_relation(long p, long k, long m, const TowerClass& d_prime);

/// Pushforward of a structure-sheaf summand list along pi:
///   pi_*(0*F + pi*c) -> c,   pi_*(a*F + pi*c) -> nothing for integer a < 0.
/// Positive or non-integral twists are outside the supported model and throw
/// UnsupportedError. Returns the surviving base classes in order.
std::vector<TowerClass> pushforward_structure(const SummandList& summands);

/// Pullback of a bundle class along the k-th cover phi: X~ -> P, given the
/// multiplier s with phi*F = s * F~. Result lives one level up.
TowerClass cover_pullback(const PBundleClass& cls, const Rat& f_multiplier);

nlohmann::json to_json(const PBundleClass& c);
nlohmann::json to_json(const SummandList& s);
PBundleClass pbundle_class_from_json(const nlohmann::json& j);

}  // namespace tango
