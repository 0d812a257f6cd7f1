#include "tangotower/artin_schreier.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tangotower/errors.hpp"

namespace tango {

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

long poly_deg(const PrimePoly& a) {
  for (long i = static_cast<long>(a.size()) - 1; i >= 0; --i)
    if (a[static_cast<std::size_t>(i)] != 0) return i;
  return -1;
}

void poly_trim(PrimePoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PrimePoly poly_add(const PrimePoly& a, const PrimePoly& b, long p) {
  PrimePoly c(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    unsigned v = 0;
    if (i < a.size()) v += a[i];
    if (i < b.size()) v += b[i];
    c[i] = v % static_cast<unsigned>(p);
  }
  poly_trim(c);
  return c;
}

PrimePoly poly_scale(long c, const PrimePoly& a, long p) {
  long cc = c % p;
  if (cc < 0) cc += p;
  PrimePoly out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = static_cast<unsigned>((static_cast<long>(a[i]) * cc) % p);
  poly_trim(out);
  return out;
}

PrimePoly poly_sub(const PrimePoly& a, const PrimePoly& b, long p) {
  return poly_add(a, poly_scale(p - 1, b, p), p);
}

PrimePoly poly_mul(const PrimePoly& a, const PrimePoly& b, long p) {
  if (a.empty() || b.empty()) return {};
  PrimePoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      c[i + j] = static_cast<unsigned>(
          (c[i + j] + static_cast<long>(a[i]) * b[j]) % p);
    }
  }
  poly_trim(c);
  return c;
}

long mod_inverse(long a, long p) {
  long result = 1;
  long base = ((a % p) + p) % p;
  long e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result;
}

PrimePoly poly_derivative(const PrimePoly& a, long p) {
  if (a.size() <= 1) return {};
  PrimePoly d(a.size() - 1, 0);
  for (std::size_t i = 1; i < a.size(); ++i)
    d[i - 1] = static_cast<unsigned>((static_cast<long>(a[i]) * (static_cast<long>(i) % p)) % p);
  poly_trim(d);
  return d;
}

// Exact division in F_p[x]; throws if the remainder is nonzero.
PrimePoly poly_divexact(const PrimePoly& a, const PrimePoly& b, long p) {
  const long db = poly_deg(b);
  if (db < 0) throw Error("poly_divexact: division by zero polynomial");
  PrimePoly rem = a;
  poly_trim(rem);
  long da = poly_deg(rem);
  if (da < 0) return {};
  if (da < db) throw Error("poly_divexact: inexact division");
  PrimePoly q(static_cast<std::size_t>(da - db + 1), 0);
  const long lead_inv = mod_inverse(b[static_cast<std::size_t>(db)], p);
  for (long i = da; i >= db; --i) {
    const unsigned top = rem[static_cast<std::size_t>(i)];
    if (top == 0) continue;
    const long c = static_cast<long>(top) * lead_inv % p;
    q[static_cast<std::size_t>(i - db)] = static_cast<unsigned>(c);
    for (long j = 0; j <= db; ++j) {
      auto& slot = rem[static_cast<std::size_t>(i - db + j)];
      long v = (static_cast<long>(slot) - c * b[static_cast<std::size_t>(j)]) % p;
      if (v < 0) v += p;
      slot = static_cast<unsigned>(v);
    }
  }
  if (poly_deg(rem) >= 0) throw Error("poly_divexact: inexact division");
  poly_trim(q);
  return q;
}

}  // namespace

ArtinSchreierCurve::ArtinSchreierCurve(long p, const std::vector<long>& f_coeffs) : p_(p) {
  if (!is_prime(p)) throw PreconditionError("curve: p = " + std::to_string(p) + " is not prime");
  f_.clear();
  for (long c : f_coeffs) {
    long v = c % p;
    if (v < 0) v += p;
    f_.push_back(static_cast<unsigned>(v));
  }
  poly_trim(f_);
  m_ = poly_deg(f_);
  if (m_ < 1) throw PreconditionError("curve: f must be nonconstant mod p");
  if (std::gcd(m_, p_) != 1)
    throw PreconditionError("curve: gcd(deg f, p) = gcd(" + std::to_string(m_) + ", " +
                            std::to_string(p_) + ") != 1");
  genus_ = (p_ - 1) * (m_ - 1) / 2;
}

PrimePoly ArtinSchreierCurve::f_derivative() const { return poly_derivative(f_, p_); }

CurveFunction CurveFunction::monomial(long i, long j, long c) {
  if (i < 0 || j < 0) throw PreconditionError("CurveFunction::monomial: negative exponent");
  if (c < 0) throw PreconditionError("CurveFunction::monomial: coefficient must be >= 0");
  CurveFunction fn;
  if (c == 0) return fn;
  fn.rows_.resize(static_cast<std::size_t>(j + 1));
  fn.rows_[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(i + 1), 0);
  // raw value; every curve operation normalizes coefficients mod p
  fn.rows_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = static_cast<unsigned>(c);
  return fn;
}

bool CurveFunction::is_zero() const {
  for (const PrimePoly& row : rows_)
    if (poly_deg(row) >= 0) return false;
  return true;
}

long CurveFunction::y_degree() const {
  for (long j = static_cast<long>(rows_.size()) - 1; j >= 0; --j)
    if (poly_deg(rows_[static_cast<std::size_t>(j)]) >= 0) return j;
  return -1;
}

unsigned CurveFunction::coeff(long i, long j) const {
  if (j < 0 || j >= static_cast<long>(rows_.size())) return 0;
  const PrimePoly& row = rows_[static_cast<std::size_t>(j)];
  if (i < 0 || i >= static_cast<long>(row.size())) return 0;
  return row[static_cast<std::size_t>(i)];
}

void CurveFunction::set_coeff(long i, long j, long c, long p) {
  long v = c % p;
  if (v < 0) v += p;
  if (j >= static_cast<long>(rows_.size())) rows_.resize(static_cast<std::size_t>(j + 1));
  PrimePoly& row = rows_[static_cast<std::size_t>(j)];
  if (i >= static_cast<long>(row.size())) row.resize(static_cast<std::size_t>(i + 1), 0);
  row[static_cast<std::size_t>(i)] = static_cast<unsigned>(v);
  trim();
}

void CurveFunction::trim() {
  for (PrimePoly& row : rows_) poly_trim(row);
  while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
}

bool operator==(const CurveFunction& a, const CurveFunction& b) {
  const long da = a.y_degree();
  if (da != b.y_degree()) return false;
  for (long j = 0; j <= da; ++j) {
    PrimePoly ra = a.rows_[static_cast<std::size_t>(j)];
    PrimePoly rb = b.rows_[static_cast<std::size_t>(j)];
    poly_trim(ra);
    poly_trim(rb);
    if (ra != rb) return false;
  }
  return true;
}

CurveFunction cf_reduce(const ArtinSchreierCurve& curve, std::vector<PrimePoly> rows) {
  const long p = curve.p();
  // normalize entries mod p
  for (PrimePoly& row : rows)
    for (unsigned& c : row) c = static_cast<unsigned>(c % static_cast<unsigned>(p));
  // y^p = y + f, applied from the top down
  for (long j = static_cast<long>(rows.size()) - 1; j >= p; --j) {
    PrimePoly top = rows[static_cast<std::size_t>(j)];
    poly_trim(top);
    if (top.empty()) continue;
    rows[static_cast<std::size_t>(j)].clear();
    rows[static_cast<std::size_t>(j - p + 1)] =
        poly_add(rows[static_cast<std::size_t>(j - p + 1)], top, p);
    rows[static_cast<std::size_t>(j - p)] =
        poly_add(rows[static_cast<std::size_t>(j - p)], poly_mul(top, curve.f(), p), p);
  }
  CurveFunction out;
  out.rows_ = std::move(rows);
  out.trim();
  return out;
}

CurveFunction cf_add(const ArtinSchreierCurve& curve, const CurveFunction& a,
                     const CurveFunction& b) {
  std::vector<PrimePoly> rows(std::max(a.rows().size(), b.rows().size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    PrimePoly ra = j < a.rows().size() ? a.rows()[j] : PrimePoly{};
    PrimePoly rb = j < b.rows().size() ? b.rows()[j] : PrimePoly{};
    rows[j] = poly_add(ra, rb, curve.p());
  }
  return cf_reduce(curve, std::move(rows));
}

CurveFunction cf_scale(const ArtinSchreierCurve& curve, long c, const CurveFunction& a) {
  std::vector<PrimePoly> rows(a.rows().size());
  for (std::size_t j = 0; j < rows.size(); ++j) rows[j] = poly_scale(c, a.rows()[j], curve.p());
  return cf_reduce(curve, std::move(rows));
}

CurveFunction cf_mul(const ArtinSchreierCurve& curve, const CurveFunction& a,
                     const CurveFunction& b) {
  if (a.is_zero() || b.is_zero()) return CurveFunction();
  std::vector<PrimePoly> rows(a.rows().size() + b.rows().size() - 1);
  for (std::size_t ja = 0; ja < a.rows().size(); ++ja) {
    if (poly_deg(a.rows()[ja]) < 0) continue;
    for (std::size_t jb = 0; jb < b.rows().size(); ++jb) {
      if (poly_deg(b.rows()[jb]) < 0) continue;
      rows[ja + jb] =
          poly_add(rows[ja + jb], poly_mul(a.rows()[ja], b.rows()[jb], curve.p()), curve.p());
    }
  }
  return cf_reduce(curve, std::move(rows));
}

CurveFunction cf_pow(const ArtinSchreierCurve& curve, const CurveFunction& a, long e) {
  if (e < 0) throw PreconditionError("cf_pow: negative exponent");
  CurveFunction result = CurveFunction::constant(1);
  CurveFunction base = cf_reduce(curve, {a.rows().begin(), a.rows().end()});
  while (e > 0) {
    if (e & 1) result = cf_mul(curve, result, base);
    base = cf_mul(curve, base, base);
    e >>= 1;
  }
  return result;
}

long weight(const ArtinSchreierCurve& curve, const CurveFunction& a_in) {
  const CurveFunction a = cf_reduce(curve, {a_in.rows().begin(), a_in.rows().end()});
  if (a.is_zero()) throw PreconditionError("weight of the zero function");
  long best = -1;
  for (long j = 0; j <= a.y_degree(); ++j) {
    const long dx = poly_deg(a.rows()[static_cast<std::size_t>(j)]);
    if (dx < 0) continue;
    for (long i = 0; i <= dx; ++i)
      if (a.rows()[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] != 0)
        best = std::max(best, curve.monomial_weight(i, j));
  }
  return best;
}

CurveFunction differential_of(const ArtinSchreierCurve& curve, const CurveFunction& eta) {
  const long p = curve.p();
  const CurveFunction e = cf_reduce(curve, {eta.rows().begin(), eta.rows().end()});
  std::vector<PrimePoly> rows(e.rows().size());
  // d eta/dx part
  for (std::size_t j = 0; j < e.rows().size(); ++j)
    rows[j] = poly_derivative(e.rows()[j], p);
  // - f'(x) * d eta/dy part
  const PrimePoly fp = curve.f_derivative();
  for (std::size_t j = 1; j < e.rows().size(); ++j) {
    const PrimePoly term = poly_mul(poly_scale(-static_cast<long>(j), e.rows()[j], p), fp, p);
    rows[j - 1] = poly_add(rows[j - 1], term, p);
  }
  return cf_reduce(curve, std::move(rows));
}

long infinity_valuation(const ArtinSchreierCurve& curve, const CurveFunction& h,
                        bool as_differential) {
  if (h.is_zero()) throw PreconditionError("infinity_valuation of the zero function");
  const long v = -weight(curve, h);
  return as_differential ? v + curve.two_g_minus_2() : v;
}

namespace {

// det of a square matrix over F_p[x] by fraction-free elimination
PrimePoly poly_matrix_det(std::vector<std::vector<PrimePoly>> M, long p) {
  const std::size_t n = M.size();
  if (n == 0) return {1};
  long sign = 1;
  PrimePoly prev{1};
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (poly_deg(M[k][k]) < 0) {
      std::size_t swap_row = n;
      for (std::size_t i = k + 1; i < n; ++i)
        if (poly_deg(M[i][k]) >= 0) {
          swap_row = i;
          break;
        }
      if (swap_row == n) return {};  // singular
      std::swap(M[k], M[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        const PrimePoly num =
            poly_sub(poly_mul(M[i][j], M[k][k], p), poly_mul(M[i][k], M[k][j], p), p);
        M[i][j] = poly_divexact(num, prev, p);
      }
      M[i][k].clear();
    }
    prev = M[k][k];
  }
  return sign > 0 ? M[n - 1][n - 1] : poly_scale(-1, M[n - 1][n - 1], p);
}

}  // namespace

long norm_degree(const ArtinSchreierCurve& curve, const CurveFunction& h_in) {
  const CurveFunction h = cf_reduce(curve, {h_in.rows().begin(), h_in.rows().end()});
  if (h.is_zero()) throw PreconditionError("norm_degree of the zero function");
  const long p = curve.p();
  const long t = h.y_degree();
  if (t == 0) {
    // Norm of a pure-x function is its p-th power.
    return p * poly_deg(h.rows()[0]);
  }
  // Sylvester matrix of g = y^p - y - f and h in y over F_p[x]
  std::vector<PrimePoly> g(static_cast<std::size_t>(p + 1));
  g[static_cast<std::size_t>(p)] = {1};
  g[1] = poly_add(g[1], poly_scale(-1, PrimePoly{1}, p), p);
  g[0] = poly_add(g[0], poly_scale(-1, curve.f(), p), p);
  const std::size_t n = static_cast<std::size_t>(p + t);
  std::vector<std::vector<PrimePoly>> M(n, std::vector<PrimePoly>(n));
  for (long row = 0; row < t; ++row)
    for (long col = 0; col <= p; ++col)
      M[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + col)] =
          g[static_cast<std::size_t>(p - col)];
  for (long row = 0; row < p; ++row)
    for (long col = 0; col <= t; ++col)
      M[static_cast<std::size_t>(t + row)][static_cast<std::size_t>(row + col)] =
          h.rows()[static_cast<std::size_t>(t - col)];
  const PrimePoly det = poly_matrix_det(std::move(M), p);
  const long deg = poly_deg(det);
  if (deg < 0) throw Error("norm_degree: vanishing resultant for a nonzero function");
  return deg;
}

DifferentialReport differential_report(const ArtinSchreierCurve& curve,
                                       const CurveFunction& eta) {
  DifferentialReport report;
  report.h = differential_of(curve, eta);
  if (report.h.is_zero())
    throw PreconditionError("differential_report: d eta = 0 (eta is a p-th power plus constant)");
  report.v_infinity = infinity_valuation(curve, report.h, /*as_differential=*/true);
  report.finite_part_degree = norm_degree(curve, report.h);
  report.total_degree = report.v_infinity + report.finite_part_degree;
  if (report.total_degree != curve.two_g_minus_2())
    throw Error("differential_report: divisor degree identity violated (internal)");
  return report;
}

namespace {

using Elem = ExtField::Elem;
using Series = std::vector<Elem>;  // truncated power series over an ExtField

Series series_mul(const ExtField& K, const Series& a, const Series& b, std::size_t n) {
  Series c(n, K.zero());
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (K.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j)
      c[i + j] = K.add(c[i + j], K.mul(a[i], b[j]));
  }
  return c;
}

Series series_add(const ExtField& K, const Series& a, const Series& b, std::size_t n) {
  Series c(n, K.zero());
  for (std::size_t i = 0; i < n; ++i) {
    Elem v = K.zero();
    if (i < a.size()) v = K.add(v, a[i]);
    if (i < b.size()) v = K.add(v, b[i]);
    c[i] = v;
  }
  return c;
}

Series series_pow(const ExtField& K, const Series& a, long e, std::size_t n) {
  Series result(n, K.zero());
  result[0] = K.one();
  Series base = a;
  while (e > 0) {
    if (e & 1) result = series_mul(K, result, base, n);
    base = series_mul(K, base, base, n);
    e >>= 1;
  }
  return result;
}

long series_valuation(const ExtField& K, const Series& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!K.is_zero(a[i])) return static_cast<long>(i);
  return -1;  // identically zero to this precision
}

// p(a + s) mod s^n for a prime-field-coefficient polynomial
Series shifted_poly(const ExtField& K, const PrimePoly& poly, const Elem& a, std::size_t n) {
  Series r(n, K.zero());
  for (long i = static_cast<long>(poly.size()) - 1; i >= 0; --i) {
    // r = r * (a + s) + c_i
    Series next(n, K.zero());
    for (std::size_t t = 0; t < n; ++t) {
      if (K.is_zero(r[t])) continue;
      next[t] = K.add(next[t], K.mul(r[t], a));
      if (t + 1 < n) next[t + 1] = K.add(next[t + 1], r[t]);
    }
    next[0] = K.add(next[0], K.from_base(poly[static_cast<std::size_t>(i)]));
    r = std::move(next);
  }
  return r;
}

// Vanishing order of h at the smooth affine point (a, b): expand the
// y-branch through b as a series in s = x - a and read off the valuation.
long point_multiplicity(const ArtinSchreierCurve& curve, const ExtField& K, const Elem& a,
                        const Elem& b, const CurveFunction& h, std::size_t precision) {
  const long p = curve.p();
  const Series F = shifted_poly(K, curve.f(), a, precision);
  Series Y(precision, K.zero());
  Y[0] = b;
  // Newton for g(Y) = Y^p - Y - F: the update Y += g(Y) sends g to g^p,
  // multiplying its s-adic valuation by p each pass.
  for (;;) {
    Series g = series_pow(K, Y, p, precision);
    for (std::size_t t = 0; t < precision; ++t) {
      Elem v = K.sub(g[t], t < Y.size() ? Y[t] : K.zero());
      v = K.sub(v, t < F.size() ? F[t] : K.zero());
      g[t] = v;
    }
    const long val = series_valuation(K, g);
    if (val < 0) break;  // branch equation satisfied to full precision
    if (val == 0) throw Error("point_multiplicity: point is not on the curve");
    Y = series_add(K, Y, g, precision);
  }
  // evaluate h along the branch
  Series result(precision, K.zero());
  for (long j = h.y_degree(); j >= 0; --j) {
    result = series_mul(K, result, Y, precision);
    result = series_add(K, result, shifted_poly(K, h.rows()[static_cast<std::size_t>(j)], a, precision),
                        precision);
  }
  const long val = series_valuation(K, result);
  if (val < 0)
    throw UnsupportedError("point_multiplicity: precision exhausted before a nonzero term");
  return val;
}

Elem eval_poly(const ExtField& K, const PrimePoly& poly, const Elem& a) {
  Elem r = K.zero();
  for (long i = static_cast<long>(poly.size()) - 1; i >= 0; --i) {
    r = K.mul(r, a);
    r = K.add(r, K.from_base(poly[static_cast<std::size_t>(i)]));
  }
  return r;
}

Elem eval_function(const ArtinSchreierCurve& curve, const ExtField& K, const CurveFunction& h,
                   const Elem& a, const Elem& b) {
  (void)curve;
  Elem r = K.zero();
  for (long j = h.y_degree(); j >= 0; --j) {
    r = K.mul(r, b);
    r = K.add(r, eval_poly(K, h.rows()[static_cast<std::size_t>(j)], a));
  }
  return r;
}

}  // namespace

FiniteDegreeResult brute_force_divisor_degree(const ArtinSchreierCurve& curve,
                                              const CurveFunction& h_in, int field_ext_bound) {
  const CurveFunction h = cf_reduce(curve, {h_in.rows().begin(), h_in.rows().end()});
  if (h.is_zero()) throw PreconditionError("brute_force_divisor_degree: h = 0");
  if (field_ext_bound < 1)
    throw PreconditionError("brute_force_divisor_degree: field_ext_bound must be >= 1");
  FiniteDegreeResult result;
  result.certified_total = norm_degree(curve, h);
  const std::size_t precision = static_cast<std::size_t>(weight(curve, h)) + 2;
  const long p = curve.p();
  for (int d = 1; d <= field_ext_bound; ++d) {
    const ExtField K(p, d);
    const long order = K.order();
    // bucket b by b^p - b so the fiber over each a is a direct lookup
    std::vector<std::vector<Elem>> fiber(static_cast<std::size_t>(order));
    for (long nb = 0; nb < order; ++nb) {
      const Elem b = K.element(nb);
      fiber[static_cast<std::size_t>(K.index(K.sub(K.pow(b, p), b)))].push_back(b);
    }
    for (long na = 0; na < order; ++na) {
      const Elem a = K.element(na);
      const Elem fa = eval_poly(K, curve.f(), a);
      const int deg_a = K.definition_degree(a);
      for (const Elem& b : fiber[static_cast<std::size_t>(K.index(fa))]) {
        // count each geometric point at its exact field of definition
        if (std::lcm(deg_a, K.definition_degree(b)) != d) continue;
        if (!K.is_zero(eval_function(curve, K, h, a, b))) continue;
        result.enumerated += point_multiplicity(curve, K, a, b, h, precision);
      }
    }
  }
  result.conclusive = result.enumerated == result.certified_total;
  return result;
}

std::optional<CurveFunction> is_tango(const ArtinSchreierCurve& curve, long d) {
  if (d < 1) throw PreconditionError("is_tango: d must be >= 1");
  if (curve.p() * d != curve.two_g_minus_2()) return std::nullopt;
  // (d eta) = p d P_inf requires h constant; eta = x realizes it. Verify.
  const CurveFunction eta = CurveFunction::x();
  const DifferentialReport report = differential_report(curve, eta);
  if (report.finite_part_degree != 0 || report.v_infinity != curve.p() * d)
    throw Error("is_tango: verification of the canonical witness failed (internal)");
  return eta;
}

namespace {

struct Monomial {
  long i;
  long j;
};

// Monomial basis of reduced polynomials of weight <= bound, in a fixed
// deterministic order.
std::vector<Monomial> weight_box(const ArtinSchreierCurve& curve, long bound) {
  std::vector<Monomial> out;
  for (long j = 0; j < curve.p(); ++j)
    for (long i = 0; curve.monomial_weight(i, j) <= bound; ++i)
      if (i != 0 || j != 0) out.push_back({i, j});
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
    const long wa = curve.monomial_weight(a.i, a.j);
    const long wb = curve.monomial_weight(b.i, b.j);
    if (wa != wb) return wa < wb;
    if (a.j != b.j) return a.j < b.j;
    return a.i < b.i;
  });
  return out;
}

// Finds eta of weight <= weight_bound with d eta != 0 of weight <= target:
// linear algebra over F_p on the coefficients of the differentials of the
// basis monomials. Returns (eta, h).
std::optional<std::pair<CurveFunction, CurveFunction>> find_low_weight_differential(
    const ArtinSchreierCurve& curve, long weight_bound, long target) {
  if (target < 0) return std::nullopt;
  const long p = curve.p();
  // fast path: eta = x gives h = 1 of weight 0
  if (curve.monomial_weight(1, 0) <= weight_bound)
    return std::make_pair(CurveFunction::x(), CurveFunction::constant(1));

  const std::vector<Monomial> basis = weight_box(curve, weight_bound);
  if (basis.empty()) return std::nullopt;
  std::vector<CurveFunction> diffs;
  diffs.reserve(basis.size());
  for (const Monomial& mono : basis)
    diffs.push_back(differential_of(curve, CurveFunction::monomial(mono.i, mono.j)));

  // constraint rows: every h-monomial of weight > target must cancel
  std::vector<std::pair<long, long>> high;  // (i, j) with weight > target
  {
    std::vector<std::vector<bool>> seen;
    for (const CurveFunction& h : diffs) {
      for (long j = 0; j <= h.y_degree(); ++j)
        for (long i = 0; i < static_cast<long>(h.rows()[static_cast<std::size_t>(j)].size()); ++i) {
          if (h.coeff(i, j) == 0 || curve.monomial_weight(i, j) <= target) continue;
          if (static_cast<std::size_t>(j) >= seen.size()) seen.resize(static_cast<std::size_t>(j + 1));
          auto& row = seen[static_cast<std::size_t>(j)];
          if (static_cast<std::size_t>(i) >= row.size()) row.resize(static_cast<std::size_t>(i + 1), false);
          if (!row[static_cast<std::size_t>(i)]) {
            row[static_cast<std::size_t>(i)] = true;
            high.emplace_back(i, j);
          }
        }
    }
  }

  // Gaussian elimination for the nullspace of the (high x basis) matrix
  const std::size_t cols = basis.size();
  std::vector<std::vector<unsigned>> M;
  M.reserve(high.size());
  for (const auto& [i, j] : high) {
    std::vector<unsigned> row(cols, 0);
    for (std::size_t c = 0; c < cols; ++c) row[c] = diffs[c].coeff(i, j);
    M.push_back(std::move(row));
  }
  std::vector<long> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < M.size(); ++col) {
    std::size_t sel = M.size();
    for (std::size_t r = rank; r < M.size(); ++r)
      if (M[r][col] != 0) {
        sel = r;
        break;
      }
    if (sel == M.size()) continue;
    std::swap(M[rank], M[sel]);
    const long inv = mod_inverse(M[rank][col], p);
    for (std::size_t c = col; c < cols; ++c)
      M[rank][c] = static_cast<unsigned>(static_cast<long>(M[rank][c]) * inv % p);
    for (std::size_t r = 0; r < M.size(); ++r) {
      if (r == rank || M[r][col] == 0) continue;
      const long factor = M[r][col];
      for (std::size_t c = col; c < cols; ++c) {
        long v = (static_cast<long>(M[r][c]) - factor * M[rank][c]) % p;
        if (v < 0) v += p;
        M[r][c] = static_cast<unsigned>(v);
      }
    }
    pivot_col.push_back(static_cast<long>(col));
    ++rank;
  }
  // free columns generate the nullspace
  std::vector<bool> is_pivot(cols, false);
  for (long c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  for (std::size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<unsigned> sol(cols, 0);
    sol[free_col] = 1;
    for (std::size_t r = 0; r < rank; ++r) {
      const long pc = pivot_col[r];
      long v = (p - static_cast<long>(M[r][free_col])) % p;
      sol[static_cast<std::size_t>(pc)] = static_cast<unsigned>(v);
    }
    // assemble h and eta for this nullspace vector
    CurveFunction eta, h;
    for (std::size_t c = 0; c < cols; ++c) {
      if (sol[c] == 0) continue;
      eta = cf_add(curve, eta,
                   cf_scale(curve, sol[c], CurveFunction::monomial(basis[c].i, basis[c].j)));
      h = cf_add(curve, h, cf_scale(curve, sol[c], diffs[c]));
    }
    if (!h.is_zero()) return std::make_pair(eta, h);
  }
  return std::nullopt;
}

}  // namespace

std::optional<CurveFunction> pre_tango_search(const ArtinSchreierCurve& curve, long d,
                                              long weight_bound) {
  if (d < 1) throw PreconditionError("pre_tango_search: d must be >= 1");
  const long target = curve.two_g_minus_2() - curve.p() * d;
  auto found = find_low_weight_differential(curve, weight_bound, target);
  if (!found) return std::nullopt;
  return found->first;
}

TangoInvariantBounds tango_invariant_bounds(const ArtinSchreierCurve& curve, long weight_bound) {
  if (curve.genus() < 2)
    throw PreconditionError("tango_invariant_bounds: genus must be >= 2");
  TangoInvariantBounds bounds;
  bounds.upper = make_rat(2 * (curve.genus() - 1), curve.p());
  bounds.lower = 0;
  for (long target = 0; target <= curve.two_g_minus_2(); ++target) {
    auto found = find_low_weight_differential(curve, weight_bound, target);
    if (found) {
      const long v_inf = infinity_valuation(curve, found->second, /*as_differential=*/true);
      bounds.lower = floor_div(v_inf, curve.p());
      bounds.witness = found->first;
      break;
    }
  }
  if (bounds.lower < 0) bounds.lower = 0;
  bounds.exact = Rat(bounds.lower) == bounds.upper;
  return bounds;
}

ArtinSchreierCurve raynaud_family(long p, long ell) {
  if (ell < 1) throw PreconditionError("raynaud_family: ell must be >= 1");
  if (ell * (p - 1) - 2 < 1)
    throw PreconditionError("raynaud_family: l(p-1) - 2 = " + std::to_string(ell * (p - 1) - 2) +
                            " < 1, the would-be Tango divisor is not ample");
  std::vector<long> coeffs(static_cast<std::size_t>(ell * p - 1), 0);
  coeffs.push_back(1);  // x^(lp - 1)
  return ArtinSchreierCurve(p, coeffs);
}

long count_projective_points(const ArtinSchreierCurve& curve, int d) {
  const ExtField K(curve.p(), d);
  const long order = K.order();
  std::vector<long> fiber_count(static_cast<std::size_t>(order), 0);
  for (long nb = 0; nb < order; ++nb) {
    const Elem b = K.element(nb);
    fiber_count[static_cast<std::size_t>(K.index(K.sub(K.pow(b, curve.p()), b)))] += 1;
  }
  long total = 1;  // the place at infinity
  for (long na = 0; na < order; ++na) {
    const Elem a = K.element(na);
    total += fiber_count[static_cast<std::size_t>(K.index(eval_poly(K, curve.f(), a)))];
  }
  return total;
}

ArtinSchreierCurve curve_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("curve: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "p" && key != "f") throw InputError("curve: unknown field '" + key + "'");
  }
  if (!j.contains("p") || !j["p"].is_number_integer())
    throw InputError("curve: missing integer field 'p'");
  if (!j.contains("f") || !j["f"].is_array())
    throw InputError("curve: missing array field 'f'");
  std::vector<long> coeffs;
  for (const auto& c : j["f"]) {
    if (!c.is_number_integer()) throw InputError("curve: coefficients of 'f' must be integers");
    coeffs.push_back(c.get<long>());
  }
  try {
    return ArtinSchreierCurve(j["p"].get<long>(), coeffs);
  } catch (const PreconditionError& e) {
    throw InputError(std::string("curve: ") + e.what());
  }
}

nlohmann::json to_json(const ArtinSchreierCurve& curve) {
  nlohmann::json f = nlohmann::json::array();
  for (unsigned c : curve.f()) f.push_back(c);
  return {{"p", curve.p()}, {"f", std::move(f)}};
}

std::string to_string(const CurveFunction& fn) {
  if (fn.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (long j = fn.y_degree(); j >= 0; --j) {
    const PrimePoly& row = fn.rows()[static_cast<std::size_t>(j)];
    for (long i = static_cast<long>(row.size()) - 1; i >= 0; --i) {
      const unsigned c = row[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      if (!first) os << " + ";
      bool printed = false;
      if (c != 1 || (i == 0 && j == 0)) {
        os << c;
        printed = true;
      }
      if (i > 0) {
        if (printed) os << "*";
        os << "x";
        if (i > 1) os << "^" << i;
        printed = true;
      }
      if (j > 0) {
        if (printed) os << "*";
        os << "y";
        if (j > 1) os << "^" << j;
      }
      first = false;
    }
  }
  return os.str();
}

nlohmann::json to_json(const CurveFunction& fn) {
  nlohmann::json rows = nlohmann::json::array();
  for (const PrimePoly& row : fn.rows()) {
    nlohmann::json r = nlohmann::json::array();
    for (unsigned c : row) r.push_back(c);
    rows.push_back(std::move(r));
  }
  return {{"rows", std::move(rows)}, {"text", to_string(fn)}};
}

}  // namespace tango
