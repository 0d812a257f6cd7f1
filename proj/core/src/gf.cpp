#include "tangotower/gf.hpp"

#include <string>

#include "tangotower/errors.hpp"

namespace tango {

namespace {

struct TableEntry {
  long p;
  int d;
  unsigned coeffs[7];  // little-endian, degree d, monic
};

// Lexicographically least monic irreducible over F_p for each degree,
// ordered by the base-p encoding of the non-leading coefficients.
constexpr TableEntry kIrreducibles[] = {
    {2, 1, {0, 1}},          {2, 2, {1, 1, 1}},          {2, 3, {1, 1, 0, 1}},
    {2, 4, {1, 1, 0, 0, 1}}, {2, 5, {1, 0, 1, 0, 0, 1}}, {2, 6, {1, 1, 0, 0, 0, 0, 1}},
    {3, 1, {0, 1}},          {3, 2, {1, 0, 1}},          {3, 3, {1, 2, 0, 1}},
    {3, 4, {2, 1, 0, 0, 1}}, {3, 5, {1, 2, 0, 0, 0, 1}}, {3, 6, {2, 1, 0, 0, 0, 0, 1}},
    {5, 1, {0, 1}},          {5, 2, {2, 0, 1}},          {5, 3, {1, 1, 0, 1}},
    {5, 4, {2, 0, 0, 0, 1}}, {5, 5, {1, 4, 0, 0, 0, 1}}, {5, 6, {2, 1, 0, 0, 0, 0, 1}},
    {7, 1, {0, 1}},          {7, 2, {1, 0, 1}},          {7, 3, {2, 0, 0, 1}},
    {7, 4, {1, 1, 0, 0, 1}}, {7, 5, {3, 1, 0, 0, 0, 1}}, {7, 6, {2, 0, 0, 0, 0, 0, 1}},
    {11, 1, {0, 1}},         {11, 2, {1, 0, 1}},         {11, 3, {4, 1, 0, 1}},
    {11, 4, {2, 1, 0, 0, 1}},{11, 5, {2, 0, 0, 0, 0, 1}},{11, 6, {2, 1, 0, 0, 0, 0, 1}},
    {13, 1, {0, 1}},         {13, 2, {2, 0, 1}},         {13, 3, {2, 0, 0, 1}},
    {13, 4, {2, 0, 0, 0, 1}},{13, 5, {2, 4, 0, 0, 0, 1}},{13, 6, {2, 0, 0, 0, 0, 0, 1}},
};

}  // namespace

std::vector<unsigned> irreducible_modulus(long p, int d) {
  for (const TableEntry& e : kIrreducibles)
    if (e.p == p && e.d == d) return std::vector<unsigned>(e.coeffs, e.coeffs + d + 1);
  return {};
}

ExtField::ExtField(long p, int d) : p_(p), d_(d) {
  const std::vector<unsigned> mod = irreducible_modulus(p, d);
  if (mod.empty())
    throw UnsupportedError("no modulus table entry for F_{" + std::to_string(p) + "^" +
                           std::to_string(d) + "} (p <= 13, d <= 6 supported)");
  mod_.fill(0);
  for (int i = 0; i <= d; ++i) mod_[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(mod[static_cast<std::size_t>(i)]);
  order_ = 1;
  for (int i = 0; i < d; ++i) order_ *= p;
}

ExtField::Elem ExtField::one() const {
  Elem a{};
  a[0] = 1;
  return a;
}

ExtField::Elem ExtField::from_base(long value) const {
  Elem a{};
  long v = value % p_;
  if (v < 0) v += p_;
  a[0] = static_cast<std::uint16_t>(v);
  return a;
}

ExtField::Elem ExtField::element(long n) const {
  Elem a{};
  for (int i = 0; i < d_; ++i) {
    a[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(n % p_);
    n /= p_;
  }
  return a;
}

long ExtField::index(const Elem& a) const {
  long n = 0;
  for (int i = d_ - 1; i >= 0; --i) n = n * p_ + a[static_cast<std::size_t>(i)];
  return n;
}

bool ExtField::is_zero(const Elem& a) const {
  for (int i = 0; i < d_; ++i)
    if (a[static_cast<std::size_t>(i)] != 0) return false;
  return true;
}

bool ExtField::eq(const Elem& a, const Elem& b) const {
  for (int i = 0; i < d_; ++i)
    if (a[static_cast<std::size_t>(i)] != b[static_cast<std::size_t>(i)]) return false;
  return true;
}

ExtField::Elem ExtField::add(const Elem& a, const Elem& b) const {
  Elem c{};
  for (int i = 0; i < d_; ++i)
    c[static_cast<std::size_t>(i)] =
        static_cast<std::uint16_t>((a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)]) % p_);
  return c;
}

ExtField::Elem ExtField::sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

ExtField::Elem ExtField::neg(const Elem& a) const {
  Elem c{};
  for (int i = 0; i < d_; ++i)
    c[static_cast<std::size_t>(i)] =
        static_cast<std::uint16_t>((p_ - a[static_cast<std::size_t>(i)]) % p_);
  return c;
}

ExtField::Elem ExtField::mul(const Elem& a, const Elem& b) const {
  // schoolbook product then reduction by the monic modulus
  std::array<long, 11> prod{};
  for (int i = 0; i < d_; ++i) {
    if (a[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; j < d_; ++j)
      prod[static_cast<std::size_t>(i + j)] +=
          static_cast<long>(a[static_cast<std::size_t>(i)]) * b[static_cast<std::size_t>(j)];
  }
  for (int i = 2 * d_ - 2; i >= d_; --i) {
    const long c = prod[static_cast<std::size_t>(i)] % p_;
    if (c == 0) continue;
    for (int j = 0; j < d_; ++j) {
      prod[static_cast<std::size_t>(i - d_ + j)] -= c * mod_[static_cast<std::size_t>(j)];
    }
    prod[static_cast<std::size_t>(i)] = 0;
  }
  Elem out{};
  for (int i = 0; i < d_; ++i) {
    long v = prod[static_cast<std::size_t>(i)] % p_;
    if (v < 0) v += p_;
    out[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(v);
  }
  return out;
}

ExtField::Elem ExtField::pow(const Elem& a, long e) const {
  if (e < 0) return pow(inv(a), -e);
  Elem result = one();
  Elem base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

ExtField::Elem ExtField::inv(const Elem& a) const {
  if (is_zero(a)) throw PreconditionError("ExtField::inv: zero has no inverse");
  return pow(a, order_ - 2);
}

bool ExtField::in_subfield(const Elem& a, int e) const {
  long q = 1;
  for (int i = 0; i < e; ++i) q *= p_;
  return eq(pow(a, q), a);
}

int ExtField::definition_degree(const Elem& a) const {
  for (int e = 1; e <= d_; ++e)
    if (d_ % e == 0 && in_subfield(a, e)) return e;
  return d_;
}

std::vector<unsigned> ExtField::modulus() const {
  std::vector<unsigned> out;
  for (int i = 0; i <= d_; ++i) out.push_back(mod_[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace tango
