#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace tango {

/// Arithmetic in F_{p^d} as F_p[t]/(m(t)) with m from a fixed table of
/// lexicographically least monic irreducibles (p <= 13, d <= 6). The fixed
/// table keeps closed-point enumeration reproducible run to run.
class ExtField {
public:
  /// Element: little-endian coefficient vector of length d, entries in [0,p).
  using Elem = std::array<std::uint16_t, 6>;

  ExtField(long p, int d);  // throws UnsupportedError outside the table

  long p() const { return p_; }
  int degree() const { return d_; }
  long order() const { return order_; }  // p^d

  Elem zero() const { return Elem{}; }
  Elem one() const;
  Elem from_base(long value) const;  // value mod p embedded in the prime field
  /// n-th element in the fixed enumeration order (base-p digits), n < order.
  Elem element(long n) const;
  long index(const Elem& a) const;  // inverse of element()

  bool is_zero(const Elem& a) const;
  bool eq(const Elem& a, const Elem& b) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, long e) const;
  Elem inv(const Elem& a) const;  // throws on zero

  Elem frobenius(const Elem& a) const { return pow(a, p_); }
  /// True when a lies in the subfield F_{p^e} (requires e | d).
  bool in_subfield(const Elem& a, int e) const;
  /// Degree over F_p of the subfield generated by a (smallest e | d with
  /// a^(p^e) = a).
  int definition_degree(const Elem& a) const;

  /// The little-endian modulus coefficients (length d+1, monic).
  std::vector<unsigned> modulus() const;

private:
  long p_;
  int d_;
  long order_;
  std::array<std::uint16_t, 7> mod_;
};

/// Raw table access: little-endian coefficients of the modulus for F_{p^d},
/// empty if (p, d) is outside the table.
std::vector<unsigned> irreducible_modulus(long p, int d);

}  // namespace tango
