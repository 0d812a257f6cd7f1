#include "tangotower/selfcheck.hpp"

#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "tangotower/artin_schreier.hpp"
#include "tangotower/pbundle.hpp"
#include "tangotower/tower.hpp"

namespace tango {

namespace {

using Rng = std::mt19937_64;

long rand_below(Rng& rng, long n) { return static_cast<long>(rng() % static_cast<std::uint64_t>(n)); }

long rand_range(Rng& rng, long lo, long hi) { return lo + rand_below(rng, hi - lo + 1); }

Rat rand_rat(Rng& rng) { return make_rat(rand_range(rng, -9, 9), rand_range(rng, 1, 9)); }

TowerClass rand_class(Rng& rng, int level) {
  std::vector<Rat> f;
  for (int i = 0; i < level; ++i) f.push_back(rand_rat(rng));
  return TowerClass(rand_rat(rng), rand_rat(rng), std::move(f));
}

struct CheckOutcome {
  std::string name;
  bool passed = true;
  long cases = 0;
  std::string detail;
};

CheckOutcome check_abelian_group(Rng& rng, int rounds) {
  CheckOutcome out{"divisor-class-abelian-group", true, 0, ""};
  for (int round = 0; round < rounds; ++round) {
    const int level = static_cast<int>(rand_below(rng, 5));
    const TowerClass a = rand_class(rng, level);
    const TowerClass b = rand_class(rng, level);
    const TowerClass c = rand_class(rng, level);
    const Rat q = rand_rat(rng);
    bool ok = add(a, b) == add(b, a);
    ok = ok && add(add(a, b), c) == add(a, add(b, c));
    ok = ok && scale(q, add(a, b)) == add(scale(q, a), scale(q, b));
    ok = ok && pullback(add(a, b)) == add(pullback(a), pullback(b));
    ok = ok && pullback(scale(q, a)) == scale(q, pullback(a));
    ok = ok && add(a, negate(a)).is_zero();
    ok = ok && add(a, TowerClass::zero(level)) == a;
    if (!ok) {
      out.passed = false;
      out.detail = "algebraic identity failed at round " + std::to_string(round);
      break;
    }
    ++out.cases;
  }
  return out;
}

CheckOutcome check_exact_division(Rng& rng, int rounds) {
  CheckOutcome out{"divisor-class-exact-division", true, 0, ""};
  for (int round = 0; round < rounds; ++round) {
    const int level = static_cast<int>(rand_below(rng, 4));
    const long k = rand_range(rng, 1, 12);
    // integral multiple of k, so division must succeed and round-trip
    std::vector<Rat> f;
    for (int i = 0; i < level; ++i) f.push_back(Rat(k * rand_range(rng, -20, 20)));
    const TowerClass c(Rat(k * rand_range(rng, -20, 20)), Rat(k * rand_range(rng, -20, 20)),
                       std::move(f));
    const DivisionResult d = divide_exact(c, k, DivisionMode::Integral);
    bool ok = d.ok() && scale(Rat(k), *d.cls) == c;
    // rational mode always succeeds
    const DivisionResult r = divide_exact(rand_class(rng, level), k, DivisionMode::Rational);
    ok = ok && r.ok();
    if (!ok) {
      out.passed = false;
      out.detail = "division round-trip failed at round " + std::to_string(round);
      break;
    }
    ++out.cases;
  }
  return out;
}

CheckOutcome check_denominator_reconstruction(Rng& rng, int rounds) {
  CheckOutcome out{"divisor-class-denominator-reconstruction", true, 0, ""};
  const long ops = 50L * rounds;  // 10^4 composed operations at default rounds
  TowerClass acc = TowerClass::base(Rat(0), Rat(1));
  Rat product(1);
  Rat offset(0);
  for (long i = 0; i < ops; ++i) {
    if (rand_below(rng, 3) == 0) {
      const Rat q = rand_rat(rng);
      acc = add(acc, TowerClass::base(Rat(0), q));
      offset += q;
    } else {
      Rat q = rand_rat(rng);
      if (sgn(q) == 0) q = make_rat(1, 2);
      acc = scale(q, acc);
      product *= q;
      offset *= q;
    }
    ++out.cases;
  }
  // d-coefficient must equal product + offset, reconstructed independently
  if (!(acc.d() == product + offset && acc.level() == 0)) {
    out.passed = false;
    out.detail = "composed scale/add drifted from the independent fold";
  }
  return out;
}

struct RandomTower {
  TowerState state;
  std::vector<long> ks;
};

// Builds a Tango or pre-Tango base whose polarization admits the whole
// chain of integral divisions k1, k2, k3 (k_{j+1} | k_j - 1, stacked).
RandomTower random_tower_base(Rng& rng, bool allow_pre_tango) {
  const long k3 = rand_range(rng, 2, 3);
  const long k2 = k3 * rand_range(rng, 1, 2) + 1;
  const long k1 = k2 * k3 * rand_range(rng, 1, 2) + 1;
  const long d1 = k2 * k3 * rand_range(rng, 1, 2);
  const long degD = k1 * d1;
  static const long candidates[] = {2, 3, 5, 7, 11, 13};
  // k1 k2 k3 < 2*3*5*7*11*13, so some candidate prime is coprime to it
  long p = 0;
  const long start = rand_below(rng, 6);
  for (long off = 0; off < 6 && p == 0; ++off) {
    const long cand = candidates[(start + off) % 6];
    if (std::gcd(cand, k1 * k2 * k3) == 1) p = cand;
  }
  const long slack = allow_pre_tango ? rand_below(rng, 3) : 0;
  TowerState base = base_from_pre_tango_curve(p, degD, k1, slack);
  return {std::move(base), {k1, k2, k3}};
}

CheckOutcome check_justification_relation(Rng& rng, int rounds) {
  CheckOutcome out{"tower-step-justification-relation", true, 0, ""};
  for (int round = 0; round < rounds && out.passed; ++round) {
    RandomTower t = random_tower_base(rng, /*allow_pre_tango=*/true);
    const int chain = static_cast<int>(rand_range(rng, 1, 3));
    for (int j = 0; j < chain; ++j) {
      const TowerState before = t.state;
      const TowerState after = step_I(before, t.ks[static_cast<std::size_t>(j)]);
      // (d eta~) - p D~ must be the pullback of (d eta) - p D, exactly.
      const TowerClass expected = pullback(*before.justification_slack());
      const TowerClass residual = sub(*after.justification_slack(), expected);
      bool ok = residual.is_zero();
      ok = ok && after.tango() == before.tango();
      ok = ok && after.dim() == before.dim() + 1;
      ok = ok && (before.tango() != TangoFlag::Tango ||
                  *after.differential() == scale(Rat(after.p()), after.polarization()));
      if (!ok) {
        out.passed = false;
        out.detail = "justification relation failed at round " + std::to_string(round);
        break;
      }
      t.state = after;
      ++out.cases;
    }
  }
  return out;
}

CheckOutcome check_canonical_identities(Rng& rng, int rounds) {
  CheckOutcome out{"tower-step-canonical-identities", true, 0, ""};
  for (int round = 0; round < rounds && out.passed; ++round) {
    RandomTower t = random_tower_base(rng, true);
    const TowerState before = t.state;
    const long k = t.ks[0];
    const TowerState after = step_I(before, k);
    const TowerClass d_prime = after.steps().back().d_prime;
    // second route: K~ = phi*K_P + (k-1)(F~ + G~) with K_P = -2F + pi*(K + kD')
    const PBundleClass kp = canonical_of_P(before.canonical(), k, d_prime);
    TowerClass route = cover_pullback(kp, Rat(k));
    TowerClass f_tilde = TowerClass::zero(after.level());
    {
      std::vector<Rat> f(f_tilde.f().begin(), f_tilde.f().end());
      f.back() = Rat(1);
      f_tilde = TowerClass(f_tilde.e(), f_tilde.d(), std::move(f));
    }
    route = add(route, scale(Rat(k - 1), add(f_tilde, after.steps().back().g_tilde)));
    if (!(route == after.canonical())) {
      out.passed = false;
      out.detail = "ramification route disagreed at round " + std::to_string(round);
    }
    ++out.cases;
  }
  return out;
}

CheckOutcome check_cover_relations(Rng& rng, int rounds) {
  CheckOutcome out{"cover-summand-relations", true, 0, ""};
  static const long small_primes[] = {2, 3, 5, 7, 11, 13};
  for (int round = 0; round < rounds && out.passed; ++round) {
    const long p = small_primes[rand_below(rng, 6)];
    long k = rand_range(rng, 2, 9);
    while (std::gcd(p, k) != 1) ++k;
    const long m_least = least_ramification_multiplier(p, k);
    const long m = m_least + k * rand_below(rng, 3);
    const TowerClass d_prime = rand_class(rng, static_cast<int>(rand_below(rng, 3)));
    if (!verify_mk_relation(p, k, m, d_prime).ok) {
      out.passed = false;
      out.detail = "tensor-power relation failed";
      break;
    }
    const SummandList summands = cyclic_cover_summands(p, k, m, d_prime);
    const PBundleClass G = g_class(p, scale(Rat(k), d_prime));
    const long i = rand_below(rng, k);
    const long j = rand_below(rng, k);
    // twisted multiplication: summand((i+j) mod k) differs from
    // summand(i) + summand(j) by the G twist on wrap plus an effective
    // integral-part defect delta*F, delta = floor((i+j)m/k) - floor(im/k)
    // - floor(jm/k) in {0, 1}. For m = 1 the wrap correction is exactly
    // the zero locus mF + G of the twisting section and delta = 0 otherwise.
    PBundleClass lhs = add(summands[static_cast<std::size_t>(i)], summands[static_cast<std::size_t>(j)]);
    if (i + j >= k) lhs = add(lhs, G);
    const PBundleClass rhs = summands[static_cast<std::size_t>((i + j) % k)];
    const PBundleClass defect = sub(rhs, lhs);
    const long delta = floor_div((i + j) * m, k) - floor_div(i * m, k) - floor_div(j * m, k);
    bool ok = defect.base.is_zero() && defect.a == Rat(delta) && delta >= 0 && delta <= 1;
    if (m == 1) ok = ok && delta == (i + j >= k ? 1 : 0);
    if (!ok) {
      out.passed = false;
      out.detail = "twisted multiplication defect not effective at (p,k,m) = (" +
                   std::to_string(p) + "," + std::to_string(k) + "," + std::to_string(m) + ")";
      break;
    }
    // structure-sheaf pushforward: only the i = 0 summand survives
    const std::vector<TowerClass> pushed = pushforward_structure(summands);
    if (!(pushed.size() == 1 && pushed[0].is_zero())) {
      out.passed = false;
      out.detail = "pushforward did not certify the structure sheaf";
      break;
    }
    ++out.cases;
  }
  return out;
}

CheckOutcome check_degree_conservation(Rng& rng, int rounds) {
  CheckOutcome out{"curve-degree-conservation", true, 0, ""};
  const int draws = std::max(1, rounds / 10);
  static const long ps[] = {2, 3};
  for (int round = 0; round < draws && out.passed; ++round) {
    const long p = ps[rand_below(rng, 2)];
    long m = rand_range(rng, 2, 5);
    while (std::gcd(m, p) != 1) ++m;
    std::vector<long> coeffs(static_cast<std::size_t>(m + 1), 0);
    coeffs[static_cast<std::size_t>(m)] = 1;
    for (long i = 0; i < m; ++i) coeffs[static_cast<std::size_t>(i)] = rand_below(rng, p);
    const ArtinSchreierCurve curve(p, coeffs);
    // random eta of modest weight
    CurveFunction eta;
    for (int t = 0; t < 4; ++t) {
      const long i = rand_below(rng, 4);
      const long j = rand_below(rng, p);
      eta = cf_add(curve, eta,
                   cf_scale(curve, rand_range(rng, 1, p - 1 > 0 ? p - 1 : 1),
                            CurveFunction::monomial(i, j)));
    }
    const CurveFunction h = differential_of(curve, eta);
    if (h.is_zero()) continue;
    const long v_inf = infinity_valuation(curve, h, /*as_differential=*/true);
    const FiniteDegreeResult finite = brute_force_divisor_degree(curve, h, 3);
    bool ok = v_inf + finite.certified_total == curve.two_g_minus_2();
    ok = ok && finite.enumerated <= finite.certified_total;
    if (finite.conclusive) ok = ok && finite.enumerated == finite.certified_total;
    if (!ok) {
      out.passed = false;
      out.detail = "degree identity failed at p = " + std::to_string(p) +
                   ", m = " + std::to_string(m);
      break;
    }
    ++out.cases;
  }
  return out;
}

}  // namespace

SelfCheckResult run_self_checks(const SelfCheckOptions& options) {
  Rng rng(options.seed);
  std::vector<CheckOutcome> outcomes;
  outcomes.push_back(check_abelian_group(rng, options.rounds));
  outcomes.push_back(check_exact_division(rng, options.rounds));
  outcomes.push_back(check_denominator_reconstruction(rng, options.rounds));
  outcomes.push_back(check_justification_relation(rng, options.rounds));
  outcomes.push_back(check_canonical_identities(rng, options.rounds));
  outcomes.push_back(check_cover_relations(rng, options.rounds));
  outcomes.push_back(check_degree_conservation(rng, options.rounds));

  SelfCheckResult result;
  result.all_passed = true;
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckOutcome& c : outcomes) {
    checks.push_back(nlohmann::json{
        {"name", c.name}, {"passed", c.passed}, {"cases", c.cases}, {"detail", c.detail}});
    result.all_passed = result.all_passed && c.passed;
  }
  result.report = {{"seed", options.seed},
                   {"rounds", options.rounds},
                   {"checks", std::move(checks)},
                   {"all_passed", result.all_passed}};
  return result;
}

}  // namespace tango
