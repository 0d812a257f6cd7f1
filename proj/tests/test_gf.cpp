#include <doctest.h>

#include <random>

#include "tangotower/errors.hpp"
#include "tangotower/gf.hpp"

using namespace tango;

namespace {

// Self-contained polynomial arithmetic over F_p, independent of ExtField,
// implementing the textbook irreducibility criterion:
//   f irreducible of degree d  <=>  x^(p^d) = x (mod f)  and
//   gcd(x^(p^(d/q)) - x, f) = 1 for every prime q | d.
using Poly = std::vector<long>;

Poly poly_mod(Poly a, const Poly& f, long p) {
  while (a.size() >= f.size()) {
    const long c = a.back() % p;
    if (c != 0) {
      const std::size_t off = a.size() - f.size();
      for (std::size_t i = 0; i < f.size(); ++i)
        a[off + i] = ((a[off + i] - c * f[i]) % p + p) % p;
    }
    a.pop_back();
  }
  while (!a.empty() && a.back() % p == 0) a.pop_back();
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, long p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(c), f, p);
}

Poly x_power_mod(long e_p, long e_exp, const Poly& f, long p) {
  // x^(p^e_exp) scaled via repeated squaring on the exponent p^e_exp
  long exponent = 1;
  for (long i = 0; i < e_exp; ++i) exponent *= e_p;
  Poly result{1};
  Poly base = poly_mod(Poly{0, 1}, f, p);
  while (exponent > 0) {
    if (exponent & 1) result = poly_mulmod(result, base, f, p);
    base = poly_mulmod(base, base, f, p);
    exponent >>= 1;
  }
  return result;
}

Poly make_monic(Poly v, long p) {
  while (!v.empty() && v.back() % p == 0) v.pop_back();
  if (v.empty()) return v;
  long lead = ((v.back() % p) + p) % p;
  long inv = 1;
  for (long e = p - 2, b = lead; e > 0; e >>= 1) {
    if (e & 1) inv = inv * b % p;
    b = b * b % p;
  }
  for (long& c : v) c = ((c % p) * inv % p + p) % p;
  return v;
}

Poly poly_gcd(Poly a, Poly b, long p) {
  a = make_monic(std::move(a), p);
  b = make_monic(std::move(b), p);
  while (!b.empty()) {
    Poly r = make_monic(poly_mod(a, b, p), p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly x_power_minus_x(long p, long e, const Poly& f) {
  Poly v = x_power_mod(p, e, f, p);
  if (v.size() < 2) v.resize(2, 0);
  v[1] = ((v[1] - 1) % p + p) % p;
  // reduce once more: for a linear modulus the subtracted x is not reduced
  return poly_mod(std::move(v), f, p);
}

bool modulus_is_irreducible(long p, int d) {
  const std::vector<unsigned> raw = irreducible_modulus(p, d);
  if (raw.empty()) return false;
  const Poly f(raw.begin(), raw.end());
  if (!x_power_minus_x(p, d, f).empty()) return false;  // x^(p^d) != x mod f
  for (int q : {2, 3, 5}) {
    if (d % q != 0) continue;
    const Poly g = poly_gcd(f, x_power_minus_x(p, d / q, f), p);
    if (g.size() > 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("the embedded modulus table is irreducible throughout") {
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L})
    for (int d = 1; d <= 6; ++d) {
      CAPTURE(p);
      CAPTURE(d);
      CHECK(modulus_is_irreducible(p, d));
    }
  CHECK(irreducible_modulus(17, 2).empty());
  CHECK_THROWS_AS(ExtField(17, 2), UnsupportedError);
  CHECK_THROWS_AS(ExtField(2, 7), UnsupportedError);
}

TEST_CASE("field axioms on sampled elements") {
  std::mt19937_64 rng(3);
  for (long p : {2L, 3L, 5L, 13L}) {
    for (int d : {1, 2, 3}) {
      const ExtField K(p, d);
      for (int round = 0; round < 50; ++round) {
        const auto a = K.element(static_cast<long>(rng() % K.order()));
        const auto b = K.element(static_cast<long>(rng() % K.order()));
        const auto c = K.element(static_cast<long>(rng() % K.order()));
        CHECK(K.eq(K.mul(a, b), K.mul(b, a)));
        CHECK(K.eq(K.mul(K.mul(a, b), c), K.mul(a, K.mul(b, c))));
        CHECK(K.eq(K.mul(a, K.add(b, c)), K.add(K.mul(a, b), K.mul(a, c))));
        CHECK(K.eq(K.add(a, K.neg(a)), K.zero()));
        CHECK(K.eq(K.mul(a, K.one()), a));
        if (!K.is_zero(a)) CHECK(K.eq(K.mul(a, K.inv(a)), K.one()));
      }
    }
  }
}

TEST_CASE("frobenius fixes exactly the prime field") {
  const ExtField K(3, 4);
  long fixed = 0;
  for (long n = 0; n < K.order(); ++n) {
    const auto a = K.element(n);
    if (K.eq(K.frobenius(a), a)) ++fixed;
    // frobenius is a field automorphism
    const auto b = K.element((n * 7 + 1) % K.order());
    CHECK(K.eq(K.frobenius(K.mul(a, b)), K.mul(K.frobenius(a), K.frobenius(b))));
    CHECK(K.eq(K.frobenius(K.add(a, b)), K.add(K.frobenius(a), K.frobenius(b))));
  }
  CHECK(fixed == 3);
}

TEST_CASE("subfield membership counts p^e elements") {
  const ExtField K(2, 6);
  for (int e : {1, 2, 3, 6}) {
    long count = 0;
    for (long n = 0; n < K.order(); ++n)
      if (K.in_subfield(K.element(n), e)) ++count;
    long expected = 1;
    for (int i = 0; i < e; ++i) expected *= 2;
    CHECK(count == expected);
  }
  // definition degrees partition the field
  long total = 0;
  for (long n = 0; n < K.order(); ++n) {
    const int deg = K.definition_degree(K.element(n));
    CHECK(6 % deg == 0);
    ++total;
  }
  CHECK(total == K.order());
}

TEST_CASE("element/index round trip in the fixed enumeration order") {
  const ExtField K(5, 3);
  for (long n = 0; n < K.order(); n += 7) CHECK(K.index(K.element(n)) == n);
}
