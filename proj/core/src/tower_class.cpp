#include "tangotower/tower_class.hpp"

#include <sstream>

#include "tangotower/errors.hpp"

namespace tango {

TowerClass TowerClass::zero(int level) {
  return TowerClass(Rat(0), Rat(0), std::vector<Rat>(static_cast<std::size_t>(level), Rat(0)));
}

TowerClass TowerClass::base(Rat e, Rat d) {
  return TowerClass(std::move(e), std::move(d), {});
}

bool TowerClass::is_zero() const {
  if (sgn(e_) != 0 || sgn(d_) != 0) return false;
  for (const Rat& q : f_)
    if (sgn(q) != 0) return false;
  return true;
}

namespace {

void require_same_level(const TowerClass& a, const TowerClass& b, const char* op) {
  if (a.level() != b.level()) {
    std::ostringstream os;
    os << op << ": level mismatch, " << a.level() << " vs " << b.level();
    throw LevelMismatchError(os.str());
  }
}

}  // namespace

TowerClass add(const TowerClass& a, const TowerClass& b) {
  require_same_level(a, b, "add");
  std::vector<Rat> f;
  f.reserve(a.f().size());
  for (std::size_t i = 0; i < a.f().size(); ++i) f.push_back(a.f()[i] + b.f()[i]);
  return TowerClass(a.e() + b.e(), a.d() + b.d(), std::move(f));
}

TowerClass negate(const TowerClass& c) { return scale(Rat(-1), c); }

TowerClass sub(const TowerClass& a, const TowerClass& b) {
  require_same_level(a, b, "sub");
  return add(a, negate(b));
}

TowerClass scale(const Rat& q, const TowerClass& c) {
  std::vector<Rat> f;
  f.reserve(c.f().size());
  for (const Rat& x : c.f()) f.push_back(q * x);
  return TowerClass(q * c.e(), q * c.d(), std::move(f));
}

TowerClass pullback(const TowerClass& c) {
  std::vector<Rat> f(c.f().begin(), c.f().end());
  f.push_back(Rat(0));
  return TowerClass(c.e(), c.d(), std::move(f));
}

std::string DivisionFailure::message() const {
  std::ostringstream os;
  os << "coefficient " << coordinate << " = " << rat_to_string(value)
     << " is not an integer multiple of " << divisor;
  return os.str();
}

const TowerClass& DivisionResult::value() const {
  if (!cls) throw DivisionError("divide_exact failed: " + failure->message(), failure->coordinate);
  return *cls;
}

DivisionResult divide_exact(const TowerClass& c, long k, DivisionMode mode) {
  if (k < 1) throw PreconditionError("divide_exact: k must be >= 1");
  if (mode == DivisionMode::Integral) {
    auto check = [&](const Rat& v, const std::string& name) -> std::optional<DivisionFailure> {
      if (!rat_divisible(v, k)) return DivisionFailure{name, v, k};
      return std::nullopt;
    };
    if (auto fail = check(c.e(), "e")) return {std::nullopt, fail};
    if (auto fail = check(c.d(), "d")) return {std::nullopt, fail};
    for (int i = 1; i <= c.level(); ++i)
      if (auto fail = check(c.f(i), "f" + std::to_string(i))) return {std::nullopt, fail};
  }
  return {scale(make_rat(1, k), c), std::nullopt};
}

TrivialityReport is_trivial(const TowerClass& c) {
  TrivialityReport report;
  if (sgn(c.e()) != 0) {
    report.witnesses.push_back("e");
    report.effective_slack_obstruction = true;
  }
  if (sgn(c.d()) != 0) report.witnesses.push_back("d");
  for (int i = 1; i <= c.level(); ++i)
    if (sgn(c.f(i)) != 0) report.witnesses.push_back("f" + std::to_string(i));
  report.trivial = report.witnesses.empty();
  return report;
}

nlohmann::json to_json(const TowerClass& c) {
  nlohmann::json f = nlohmann::json::array();
  for (const Rat& q : c.f()) f.push_back(rat_to_string(q));
  return {{"level", c.level()}, {"e", rat_to_string(c.e())}, {"d", rat_to_string(c.d())},
          {"f", std::move(f)}};
}

TowerClass tower_class_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("divisor class: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "level" && key != "e" && key != "d" && key != "f")
      throw InputError("divisor class: unknown field '" + key + "'");
  }
  if (!j.contains("level") || !j["level"].is_number_integer())
    throw InputError("divisor class: missing integer field 'level'");
  const long level = j["level"].get<long>();
  if (level < 0) throw InputError("divisor class: negative level");
  auto coeff = [&](const char* name) -> Rat {
    if (!j.contains(name)) return Rat(0);
    if (!j[name].is_string())
      throw InputError(std::string("divisor class: field '") + name + "' must be a rational string");
    return rat_from_string(j[name].get<std::string>());
  };
  std::vector<Rat> f;
  if (j.contains("f")) {
    if (!j["f"].is_array()) throw InputError("divisor class: field 'f' must be an array");
    for (const auto& item : j["f"]) {
      if (!item.is_string()) throw InputError("divisor class: entries of 'f' must be rational strings");
      f.push_back(rat_from_string(item.get<std::string>()));
    }
  }
  if (static_cast<long>(f.size()) != level)
    throw InputError("divisor class: length of 'f' (" + std::to_string(f.size()) +
                     ") does not match 'level' (" + std::to_string(level) + ")");
  return TowerClass(coeff("e"), coeff("d"), std::move(f));
}

std::string to_string(const TowerClass& c) {
  std::ostringstream os;
  bool first = true;
  auto term = [&](const Rat& q, const std::string& sym) {
    if (sgn(q) == 0) return;
    if (!first) os << " + ";
    if (q != 1) os << rat_to_string(q) << "*";
    os << sym;
    first = false;
  };
  term(c.e(), "E");
  term(c.d(), "D'1");
  for (int i = 1; i <= c.level(); ++i) term(c.f(i), "F~" + std::to_string(i));
  if (first) os << "0";
  return os.str();
}

}  // namespace tango
