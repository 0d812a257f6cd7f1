#include "tangotower/certificate.hpp"

#include <numeric>

#include "tangotower/errors.hpp"

namespace tango {

nlohmann::json Certificate::to_json() const {
  nlohmann::json steps = nlohmann::json::array();
  for (const TraceStep& s : trace)
    steps.push_back(nlohmann::json{{"kind", s.kind},
                                   {"description", s.description},
                                   {"data", s.data},
                                   {"holds", s.holds}});
  return {{"claim", claim},         {"bounds", bounds}, {"solutions", solutions},
          {"trace", std::move(steps)}, {"verdict", verdict}, {"conditions", conditions}};
}

Certificate Certificate::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("certificate: expected a JSON object");
  Certificate cert;
  cert.claim = j.at("claim").get<std::string>();
  cert.bounds = j.value("bounds", nlohmann::json::object());
  cert.solutions = j.value("solutions", nlohmann::json::array());
  cert.verdict = j.at("verdict").get<std::string>();
  cert.conditions = j.value("conditions", nlohmann::json::array());
  for (const auto& s : j.value("trace", nlohmann::json::array())) {
    TraceStep step;
    step.kind = s.at("kind").get<std::string>();
    step.description = s.value("description", "");
    step.data = s.value("data", nlohmann::json::object());
    step.holds = s.at("holds").get<bool>();
    cert.trace.push_back(std::move(step));
  }
  return cert;
}

bool replay_step(const TraceStep& step) {
  const nlohmann::json& d = step.data;
  bool recomputed = false;
  if (step.kind == "equation") {
    recomputed = rat_from_string(d.at("lhs").get<std::string>()) ==
                 rat_from_string(d.at("rhs").get<std::string>());
  } else if (step.kind == "degree-inequality") {
    recomputed = rat_from_string(d.at("lhs").get<std::string>()) >=
                 rat_from_string(d.at("rhs").get<std::string>());
  } else if (step.kind == "integrality") {
    recomputed = rat_is_integer(rat_from_string(d.at("value").get<std::string>()));
  } else if (step.kind == "gcd") {
    recomputed = std::gcd(d.at("a").get<long>(), d.at("b").get<long>()) == 1;
  } else if (step.kind == "class-equation") {
    const TowerClass lhs = tower_class_from_json(d.at("lhs_class"));
    const TowerClass rhs = tower_class_from_json(d.at("rhs_class"));
    recomputed = sub(lhs, rhs).is_zero();
  } else if (step.kind == "note") {
    recomputed = true;
  } else {
    throw InputError("replay_step: unknown step kind '" + step.kind + "'");
  }
  return recomputed == step.holds;
}

bool replay_certificate(const Certificate& cert) {
  for (const TraceStep& step : cert.trace)
    if (!replay_step(step)) return false;
  return true;
}

}  // namespace tango
