#include "tangotower/pbundle.hpp"

#include <numeric>
#include <sstream>

#include "tangotower/errors.hpp"

namespace tango {

PBundleClass add(const PBundleClass& x, const PBundleClass& y) {
  return {x.a + y.a, add(x.base, y.base)};
}

PBundleClass sub(const PBundleClass& x, const PBundleClass& y) {
  return {x.a - y.a, sub(x.base, y.base)};
}

PBundleClass scale(const Rat& q, const PBundleClass& x) { return {q * x.a, scale(q, x.base)}; }

bool is_zero(const PBundleClass& x) { return sgn(x.a) == 0 && x.base.is_zero(); }

PBundleClass g_class(long p, const TowerClass& D) {
  return {Rat(p), scale(Rat(-p), D)};
}

PBundleClass canonical_of_P(const TowerClass& K, long k, const TowerClass& d_prime) {
  return {Rat(-2), add(K, scale(Rat(k), d_prime))};
}

long least_ramification_multiplier(long p, long k) {
  if (k < 1) throw PreconditionError("least_ramification_multiplier: k must be >= 1");
  long m = ((-p) % k + k) % k;
  return m == 0 ? k : m;
}

namespace {

void require_cover_params(long p, long k, long m, const char* op) {
  std::ostringstream os;
  if (k < 1 || m < 1) {
    os << op << ": k and m must be >= 1";
    throw PreconditionError(os.str());
  }
  if ((p + m) % k != 0) {
    os << op << ": k = " << k << " does not divide p + m = " << p + m;
    throw PreconditionError(os.str());
  }
  if (std::gcd(p, k) != 1) {
    os << op << ": gcd(p, k) = gcd(" << p << ", " << k << ") != 1";
    throw PreconditionError(os.str());
  }
}

}  // namespace

PBundleClass cover_sheaf_class(long p, long k, long m, const TowerClass& d_prime) {
  require_cover_params(p, k, m, "cover_sheaf_class");
  return {Rat(-(p + m) / k), scale(Rat(p), d_prime)};
}

SummandList cyclic_cover_summands(long p, long k, long m, const TowerClass& d_prime) {
  require_cover_params(p, k, m, "cyclic_cover_summands");
  const PBundleClass M = cover_sheaf_class(p, k, m, d_prime);
  const PBundleClass G = g_class(p, scale(Rat(k), d_prime));  // D = k D'
  SummandList out;
  out.reserve(static_cast<std::size_t>(k));
  for (long i = 0; i < k; ++i) {
    // integral part of i(mF + G)/k on the prime divisors themselves
    const long floor_f = floor_div(i * m, k);
    const long floor_g = floor_div(i, k);  // always 0 for 0 <= i < k
    PBundleClass s = scale(Rat(i), M);
    s.a += floor_f;
    if (floor_g != 0) s = add(s, scale(Rat(floor_g), G));
    out.push_back(std::move(s));
  }
  return out;
}

RelationCheck verify_mk_relation(long p, long k, long m, const TowerClass& d_prime) {
  require_cover_params(p, k, m, "verify_mk_relation");
  const PBundleClass M = cover_sheaf_class(p, k, m, d_prime);
  const PBundleClass G = g_class(p, scale(Rat(k), d_prime));
  PBundleClass expected = {Rat(-m), TowerClass::zero(d_prime.level())};
  expected = sub(expected, G);
  const PBundleClass residual = sub(scale(Rat(k), M), expected);
  return {is_zero(residual), residual};
}

std::vector<TowerClass> pushforward_structure(const SummandList& summands) {
  std::vector<TowerClass> out;
  for (std::size_t i = 0; i < summands.size(); ++i) {
    const PBundleClass& s = summands[i];
    if (sgn(s.a) > 0) {
      throw UnsupportedError("pushforward_structure: summand " + std::to_string(i) +
                             " has positive F-coefficient " + rat_to_string(s.a) +
                             "; symmetric-power pushforwards are not modeled");
    }
    if (!rat_is_integer(s.a)) {
      throw UnsupportedError("pushforward_structure: summand " + std::to_string(i) +
                             " has non-integral F-coefficient " + rat_to_string(s.a));
    }
    if (sgn(s.a) == 0) out.push_back(s.base);
    // a < 0: pi_* O_P(aF) = 0, summand drops
  }
  return out;
}

TowerClass cover_pullback(const PBundleClass& cls, const Rat& f_multiplier) {
  TowerClass up = pullback(cls.base);
  const int top = up.level();
  std::vector<Rat> f(up.f().begin(), up.f().end());
  f[static_cast<std::size_t>(top - 1)] = cls.a * f_multiplier;
  return TowerClass(up.e(), up.d(), std::move(f));
}

nlohmann::json to_json(const PBundleClass& c) {
  return {{"a", rat_to_string(c.a)}, {"base", to_json(c.base)}};
}

nlohmann::json to_json(const SummandList& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& item : s) arr.push_back(to_json(item));
  return arr;
}

PBundleClass pbundle_class_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("bundle class: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "a" && key != "base") throw InputError("bundle class: unknown field '" + key + "'");
  }
  if (!j.contains("a") || !j["a"].is_string())
    throw InputError("bundle class: missing rational string field 'a'");
  if (!j.contains("base")) throw InputError("bundle class: missing field 'base'");
  return {rat_from_string(j["a"].get<std::string>()), tower_class_from_json(j["base"])};
}

}  // namespace tango
