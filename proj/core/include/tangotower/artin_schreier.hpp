#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tangotower/gf.hpp"
#include "tangotower/rational.hpp"

namespace tango {

/// Dense little-endian polynomial over F_p.
using PrimePoly = std::vector<unsigned>;

/// The curve y^p - y = f(x) over F_p with f of degree m, gcd(m, p) = 1.
///
/// There is a single place P_inf above x = infinity, totally ramified, with
/// v(x) = -p and v(y) = -m; the genus is (p-1)(m-1)/2 and the differential
/// dx has divisor (2g-2) P_inf. Every affine point is smooth with x - a as a
/// local uniformizer (the projection to the x-line is etale).
class ArtinSchreierCurve {
public:
  /// Coefficients little-endian; they are reduced mod p. Throws
  /// PreconditionError when p is not prime, the reduced polynomial is zero,
  /// or gcd(deg f, p) != 1.
  ArtinSchreierCurve(long p, const std::vector<long>& f_coeffs);

  long p() const { return p_; }
  long m() const { return m_; }
  long genus() const { return genus_; }
  long two_g_minus_2() const { return p_ * m_ - p_ - m_ - 1; }
  const PrimePoly& f() const { return f_; }
  PrimePoly f_derivative() const;

  /// Weight of the monomial x^i y^j at P_inf: p*i + m*j = -v(x^i y^j).
  long monomial_weight(long i, long j) const { return p_ * i + m_ * j; }

private:
  long p_;
  long m_;
  long genus_;
  PrimePoly f_;
};

/// Element of the coordinate ring F_p[x,y]/(y^p - y - f) in reduced form:
/// rows[j] is the x-polynomial multiplying y^j, with j < p. The reduced form
/// is unique, and distinct reduced monomials have distinct weights (p(i-i')
/// = m(j'-j) with |j-j'| < p forces i=i', j=j'), so the leading weight of a
/// nonzero function is always carried by a single monomial.
class CurveFunction {
public:
  CurveFunction() = default;  // zero

  static CurveFunction monomial(long i, long j, long c = 1);
  static CurveFunction constant(long c) { return monomial(0, 0, c); }
  static CurveFunction x() { return monomial(1, 0); }
  static CurveFunction y() { return monomial(0, 1); }

  bool is_zero() const;
  long y_degree() const;  // -1 for zero
  const std::vector<PrimePoly>& rows() const { return rows_; }
  unsigned coeff(long i, long j) const;
  void set_coeff(long i, long j, long c, long p);

  friend bool operator==(const CurveFunction& a, const CurveFunction& b);

private:
  std::vector<PrimePoly> rows_;
  void trim();
  friend CurveFunction cf_reduce(const ArtinSchreierCurve&, std::vector<PrimePoly>);
};

CurveFunction cf_add(const ArtinSchreierCurve& curve, const CurveFunction& a,
                     const CurveFunction& b);
CurveFunction cf_scale(const ArtinSchreierCurve& curve, long c, const CurveFunction& a);
/// Product, reduced modulo y^p = y + f.
CurveFunction cf_mul(const ArtinSchreierCurve& curve, const CurveFunction& a,
                     const CurveFunction& b);
CurveFunction cf_pow(const ArtinSchreierCurve& curve, const CurveFunction& a, long e);

/// Largest monomial weight of a nonzero function; this is -v_inf.
long weight(const ArtinSchreierCurve& curve, const CurveFunction& a);

/// d eta = h dx with h = d eta/dx - f'(x) * d eta/dy; the relation
/// d(y^p - y - f) = 0 gives dy = -f'(x) dx on the curve. Kernel: reduced
/// p-th powers plus constants.
CurveFunction differential_of(const ArtinSchreierCurve& curve, const CurveFunction& eta);

/// v_inf(h), computed from the leading weight (unique-monomial lemma above);
/// with as_differential set, adds v_inf(dx) = 2g-2. Throws on h = 0.
long infinity_valuation(const ArtinSchreierCurve& curve, const CurveFunction& h,
                        bool as_differential);

/// Degree of the affine zero divisor of h != 0: deg_x of the norm
/// Res_y(y^p - y - f, h). Exact and complete (h has poles only at P_inf).
long norm_degree(const ArtinSchreierCurve& curve, const CurveFunction& h);

struct DifferentialReport {
  long v_infinity = 0;         // of d eta at P_inf
  long finite_part_degree = 0; // certified via the norm
  long total_degree = 0;       // always 2g-2 for nonzero d eta
  CurveFunction h;             // d eta = h dx
};

/// Full divisor bookkeeping for d eta; throws PreconditionError when
/// d eta = 0. The identity v_infinity + finite_part_degree == 2g-2 is
/// recomputed and enforced, never assumed.
DifferentialReport differential_report(const ArtinSchreierCurve& curve,
                                       const CurveFunction& eta);

struct FiniteDegreeResult {
  long enumerated = 0;      // sum of deg(P) * v_P(h) over found closed points
  long certified_total = 0; // deg_x Res_y(y^p - y - f, h)
  bool conclusive = false;  // enumerated == certified_total
};

/// Point-enumeration oracle: sums vanishing orders of h over closed points of
/// residue degree <= field_ext_bound (each counted with its degree), with
/// multiplicities from series expansion in the uniformizer x - a. When zeros
/// live at residue degrees beyond the bound the result is flagged
/// inconclusive; certified_total always carries the complete degree.
FiniteDegreeResult brute_force_divisor_degree(const ArtinSchreierCurve& curve,
                                              const CurveFunction& h, int field_ext_bound);

/// Witness eta with (d eta) = p d P_inf exactly: h must be a nonzero
/// constant, which happens precisely for eta = x (mod kernel) and
/// p*d == 2g-2. The returned witness is verified computationally.
std::optional<CurveFunction> is_tango(const ArtinSchreierCurve& curve, long d);

/// Searches reduced polynomial eta of weight <= weight_bound (modulo the
/// differential kernel) for (d eta) >= p d P_inf with h polynomial. Complete
/// within that space -- existence is decided by linear algebra over F_p --
/// but only a lower-bound procedure for the full function field.
std::optional<CurveFunction> pre_tango_search(const ArtinSchreierCurve& curve, long d,
                                              long weight_bound);

struct TangoInvariantBounds {
  long lower = 0;   // best floor(v_inf(d eta)/p) over the searched space
  Rat upper;        // 2(g-1)/p
  bool exact = false;
  std::optional<CurveFunction> witness;
};

/// Bounds for the largest degree of floor((d eta)/p) over divisors supported
/// at P_inf. Requires genus >= 2.
TangoInvariantBounds tango_invariant_bounds(const ArtinSchreierCurve& curve, long weight_bound);

/// The family f = x^(lp - 1): m = lp - 1, 2g - 2 = p(l(p-1) - 2), carrying
/// the Tango structure D = (l(p-1) - 2) P_inf with witness x. Requires
/// l(p-1) > 2 so that deg D >= 1.
ArtinSchreierCurve raynaud_family(long p, long ell);

/// Number of projective points over F_{p^d} (affine plus the one at
/// infinity). Used for Weil-bound consistency checks.
long count_projective_points(const ArtinSchreierCurve& curve, int d);

/// {"p": 3, "f": [0,0,0,0,0,1]} little-endian.
ArtinSchreierCurve curve_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ArtinSchreierCurve& curve);

std::string to_string(const CurveFunction& fn);
nlohmann::json to_json(const CurveFunction& fn);

}  // namespace tango
