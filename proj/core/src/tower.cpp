#include "tangotower/tower.hpp"

#include <numeric>
#include <sstream>

#include "tangotower/errors.hpp"

namespace tango {

std::string to_string(TangoFlag flag) {
  return flag == TangoFlag::Tango ? "Tango" : "PreTango";
}

std::string to_string(StepRecord::Kind kind) {
  return kind == StepRecord::Kind::I ? "I" : "II";
}

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

void validate_state(const TowerState& s) {
  if (s.polarization().level() != s.level() ||
      static_cast<int>(s.steps().size()) != s.level())
    throw PreconditionError("tower state: class levels and step count disagree");
  if (sgn(s.polarization().d()) <= 0)
    throw PreconditionError("tower state: polarization must have positive D'1 coefficient");
  for (int i = 1; i <= s.level(); ++i)
    if (sgn(s.polarization().f(i)) < 0)
      throw PreconditionError("tower state: polarization F~ coefficients must be >= 0");
}

}  // namespace

TowerState::TowerState(long p, int base_dim, TowerClass canonical, TowerClass polarization,
                       std::optional<TowerClass> differential, TangoFlag tango,
                       std::vector<StepRecord> steps)
    : p_(p),
      base_dim_(base_dim),
      canonical_(std::move(canonical)),
      polarization_(std::move(polarization)),
      differential_(std::move(differential)),
      tango_(tango),
      steps_(std::move(steps)) {
  if (!is_prime(p_)) throw PreconditionError("tower state: p = " + std::to_string(p_) + " is not prime");
  if (base_dim_ < 1) throw PreconditionError("tower state: base dimension must be >= 1");
  validate_state(*this);
}

std::optional<TowerClass> TowerState::justification_slack() const {
  if (!differential_) return std::nullopt;
  return sub(*differential_, scale(Rat(p_), polarization_));
}

TowerState base_from_tango_curve(long p, long degD, long k1) {
  return base_from_pre_tango_curve(p, degD, k1, 0);
}

TowerState base_from_pre_tango_curve(long p, long degD, long k1, long slack_e) {
  if (degD < 1) throw PreconditionError("tango curve base: degD must be >= 1");
  if (k1 < 1) throw PreconditionError("tango curve base: k1 must be >= 1");
  if (slack_e < 0) throw PreconditionError("tango curve base: slack must be >= 0");
  if (degD % k1 != 0)
    throw PreconditionError("tango curve base: k1 = " + std::to_string(k1) +
                            " does not divide deg D = " + std::to_string(degD));
  if (std::gcd(p, k1) != 1)
    throw PreconditionError("tango curve base: gcd(p, k1) = gcd(" + std::to_string(p) + ", " +
                            std::to_string(k1) + ") != 1; the cover requires (p, k) = 1");
  const TowerClass polarization = TowerClass::base_degree(Rat(degD));
  // On a curve the justification divisor is a canonical divisor:
  // K = (d eta) = p D + e E.
  const TowerClass canonical = add(scale(Rat(p), polarization), TowerClass::base(Rat(slack_e), Rat(0)));
  const TangoFlag flag = slack_e == 0 ? TangoFlag::Tango : TangoFlag::PreTango;
  return TowerState(p, 1, canonical, polarization, canonical, flag, {});
}

TowerState synthetic_base(long p, int dim, const Rat& canonical_d, const Rat& polarization_d,
                          TangoFlag tango, long slack_e) {
  if (slack_e < 0) throw PreconditionError("synthetic base: slack must be >= 0");
  if (tango == TangoFlag::Tango && slack_e != 0)
    throw PreconditionError("synthetic base: a Tango structure has zero slack");
  const TowerClass polarization = TowerClass::base_degree(polarization_d);
  const TowerClass canonical = TowerClass::base_degree(canonical_d);
  // The hypothesis supplies a justification with (d eta) = p D + e E; for a
  // synthetic stage this formal record is independent of the canonical class.
  const TowerClass differential =
      add(scale(Rat(p), polarization), TowerClass::base(Rat(slack_e), Rat(0)));
  return TowerState(p, dim, canonical, polarization, differential, tango, {});
}

namespace {

TowerClass divide_polarization(const TowerState& s, long k, const char* op) {
  DivisionResult d = divide_exact(s.polarization(), k, DivisionMode::Integral);
  if (!d.ok()) {
    throw DivisionError(std::string(op) + ": polarization D is not divisible by k = " +
                            std::to_string(k) + " (" + d.failure->message() + ")",
                        d.failure->coordinate);
  }
  return *d.cls;
}

}  // namespace

TowerState step_I(const TowerState& s, long k) {
  const long p = s.p();
  if (k < 2) throw PreconditionError("step_I: k must be >= 2");
  if (std::gcd(p, k) != 1)
    throw PreconditionError("step_I: gcd(p, k) = gcd(" + std::to_string(p) + ", " +
                            std::to_string(k) + ") != 1; the cyclic cover requires (p, k) = 1");
  const TowerClass d_prime = divide_polarization(s, k, "step_I");

  const long fk = p * k - p - k - 1;       // F~ coefficient of K~
  const long shift = p * k - p - k;        // D' shift inside f*
  TowerClass canonical = pullback(sub(s.canonical(), scale(Rat(shift), d_prime)));
  {
    std::vector<Rat> f(canonical.f().begin(), canonical.f().end());
    f.back() = Rat(fk);
    canonical = TowerClass(canonical.e(), canonical.d(), std::move(f));
  }

  TowerClass polarization = pullback(d_prime);
  {
    std::vector<Rat> f(polarization.f().begin(), polarization.f().end());
    f.back() = Rat(k - 1);
    polarization = TowerClass(polarization.e(), polarization.d(), std::move(f));
  }

  // (d eta~) = p D~ + f*((d eta) - p D): slack pulls back unchanged.
  std::optional<TowerClass> differential;
  if (s.differential()) {
    const TowerClass slack = sub(*s.differential(), scale(Rat(p), s.polarization()));
    differential = add(scale(Rat(p), polarization), pullback(slack));
  }

  StepRecord record;
  record.kind = StepRecord::Kind::I;
  record.k = k;
  record.d_prime = d_prime;
  {
    // G~ = p F~ - p f*(D'): from phi*G = k G~ and G ~ pF - p pi*(kD').
    TowerClass g = pullback(scale(Rat(-p), d_prime));
    std::vector<Rat> f(g.f().begin(), g.f().end());
    f.back() = Rat(p);
    record.g_tilde = TowerClass(g.e(), g.d(), std::move(f));
  }
  record.f_pullback_multiplier = Rat(k);

  std::vector<StepRecord> steps = s.steps();
  steps.push_back(std::move(record));
  return TowerState(p, s.base_dim(), std::move(canonical), std::move(polarization),
                    std::move(differential), s.tango(), std::move(steps));
}

TowerState step_II(const TowerState& s, long ell, long r) {
  const long p = s.p();
  if (ell < 1) throw PreconditionError("step_II: ell must be >= 1");
  if (r < 1) throw PreconditionError("step_II: r must be >= 1");
  if (std::gcd(p, r) != 1)
    throw PreconditionError("step_II: gcd(p, r) = gcd(" + std::to_string(p) + ", " +
                            std::to_string(r) + ") != 1");
  long k = r;
  for (long i = 0; i < ell; ++i) {
    if (k > (1L << 50) / p)
      throw PreconditionError("step_II: cover degree p^ell * r overflows the supported range");
    k *= p;
  }
  const long k_over_p = k / p;
  const TowerClass d_prime = divide_polarization(s, k, "step_II");

  const long fk = k - k_over_p - 2;          // p^ell r - p^(ell-1) r - 2
  const long shift = k - p * (k - 1);        // coefficient of D' inside f*, added
  TowerClass canonical = pullback(add(s.canonical(), scale(Rat(shift), d_prime)));
  {
    std::vector<Rat> f(canonical.f().begin(), canonical.f().end());
    f.back() = Rat(fk);
    canonical = TowerClass(canonical.e(), canonical.d(), std::move(f));
  }

  TowerClass polarization = pullback(d_prime);
  {
    std::vector<Rat> f(polarization.f().begin(), polarization.f().end());
    f.back() = Rat(k - 1);
    polarization = TowerClass(polarization.e(), polarization.d(), std::move(f));
  }

  StepRecord record;
  record.kind = StepRecord::Kind::II;
  record.k = k;
  record.ell = ell;
  record.r = r;
  record.d_prime = d_prime;
  {
    // G~ = F~ - p f*(D'); no factor p on F~ here.
    TowerClass g = pullback(scale(Rat(-p), d_prime));
    std::vector<Rat> f(g.f().begin(), g.f().end());
    f.back() = Rat(1);
    record.g_tilde = TowerClass(g.e(), g.d(), std::move(f));
  }
  record.f_pullback_multiplier = make_rat(k_over_p);

  std::vector<StepRecord> steps = s.steps();
  steps.push_back(std::move(record));
  // No justification certificate survives a Frobenius-degree cover.
  return TowerState(p, s.base_dim(), std::move(canonical), std::move(polarization), std::nullopt,
                    TangoFlag::PreTango, std::move(steps));
}

CanonicalClassification classify_canonical(const TowerState& s) {
  return {is_trivial(s.canonical()), s.steps()};
}

namespace {

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                  const std::string& context) {
  if (!j.is_object()) throw InputError(context + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* name : allowed)
      if (key == name) ok = true;
    if (!ok) throw InputError(context + ": unknown field '" + key + "'");
  }
}

long int_field(const nlohmann::json& j, const char* name, const std::string& context) {
  if (!j.contains(name) || !j[name].is_number_integer())
    throw InputError(context + ": missing integer field '" + std::string(name) + "'");
  return j[name].get<long>();
}

}  // namespace

TowerState run_build_script(const nlohmann::json& script) {
  require_keys(script, {"p", "base", "steps"}, "build script");
  const long p = int_field(script, "p", "build script");
  if (!script.contains("base")) throw InputError("build script: missing 'base'");
  const nlohmann::json& base = script["base"];

  TowerState state = [&]() -> TowerState {
    if (base.contains("dim")) {
      require_keys(base, {"dim", "canonical_d", "polarization_d", "tango", "slack"},
                   "build script base (synthetic)");
      const long dim = int_field(base, "dim", "synthetic base");
      auto rat_field = [&](const char* name) -> Rat {
        if (!base.contains(name) || !base[name].is_string())
          throw InputError(std::string("synthetic base: missing rational string field '") + name + "'");
        return rat_from_string(base[name].get<std::string>());
      };
      if (!base.contains("tango") || !base["tango"].is_boolean())
        throw InputError("synthetic base: missing boolean field 'tango'");
      const bool tango = base["tango"].get<bool>();
      const long slack = base.contains("slack") ? int_field(base, "slack", "synthetic base") : 0;
      return synthetic_base(p, static_cast<int>(dim), rat_field("canonical_d"),
                            rat_field("polarization_d"),
                            tango ? TangoFlag::Tango : TangoFlag::PreTango, slack);
    }
    require_keys(base, {"degD", "k1", "tango", "slack"}, "build script base");
    const long degD = int_field(base, "degD", "curve base");
    const long k1 = int_field(base, "k1", "curve base");
    if (!base.contains("tango") || !base["tango"].is_boolean())
      throw InputError("curve base: missing boolean field 'tango'");
    const bool tango = base["tango"].get<bool>();
    const long slack = base.contains("slack") ? int_field(base, "slack", "curve base") : 0;
    if (tango && slack != 0) throw InputError("curve base: a Tango base has zero slack");
    if (!tango && slack == 0)
      throw InputError("curve base: a pre-Tango base needs a positive 'slack'");
    return base_from_pre_tango_curve(p, degD, k1, slack);
  }();

  if (script.contains("steps")) {
    if (!script["steps"].is_array()) throw InputError("build script: 'steps' must be an array");
    std::size_t index = 0;
    for (const nlohmann::json& step : script["steps"]) {
      const std::string context = "step " + std::to_string(index);
      try {
        require_keys(step, {"kind", "k", "l", "r"}, context);
        if (!step.contains("kind") || !step["kind"].is_string())
          throw InputError(context + ": missing string field 'kind'");
        const std::string kind = step["kind"].get<std::string>();
        if (kind == "I") {
          state = step_I(state, int_field(step, "k", context));
        } else if (kind == "II") {
          const long ell = int_field(step, "l", context);
          const long r = int_field(step, "r", context);
          if (step.contains("k") && ell >= 1 && r >= 1) {
            long k = r;
            bool overflow = false;
            for (long i = 0; i < ell && !overflow; ++i) {
              if (k > (1L << 50) / p) overflow = true;
              k *= p;
            }
            if (overflow || step["k"].get<long>() != k)
              throw InputError(context + ": given k does not equal p^l * r");
          }
          state = step_II(state, ell, r);
        } else {
          throw InputError(context + ": 'kind' must be \"I\" or \"II\"");
        }
      } catch (const InputError&) {
        throw;
      } catch (const Error& e) {
        throw InputError(context + ": " + e.what());
      }
      ++index;
    }
  }
  return state;
}

nlohmann::json to_json(const StepRecord& r) {
  nlohmann::json j{{"kind", to_string(r.kind)},
                   {"k", r.k},
                   {"d_prime", to_json(r.d_prime)},
                   {"g_tilde", to_json(r.g_tilde)},
                   {"f_pullback_multiplier", rat_to_string(r.f_pullback_multiplier)}};
  if (r.kind == StepRecord::Kind::II) {
    j["l"] = r.ell;
    j["r"] = r.r;
  }
  return j;
}

nlohmann::json to_json(const TowerState& s) {
  nlohmann::json steps = nlohmann::json::array();
  for (const StepRecord& r : s.steps()) steps.push_back(to_json(r));
  nlohmann::json j{{"p", s.p()},
                   {"base_dim", s.base_dim()},
                   {"dim", s.dim()},
                   {"tango", to_string(s.tango())},
                   {"canonical", to_json(s.canonical())},
                   {"polarization", to_json(s.polarization())},
                   {"steps", std::move(steps)}};
  if (s.differential()) {
    j["differential"] = to_json(*s.differential());
    j["justification_slack"] = to_json(*s.justification_slack());
  } else {
    j["differential"] = nullptr;
  }
  const CanonicalClassification c = classify_canonical(s);
  j["canonical_trivial"] = c.trivial();
  j["canonical_witnesses"] = c.report.witnesses;
  return j;
}

}  // namespace tango
