// tangotower: divisor-class arithmetic on cyclic-cover towers, Tango
// verification on Artin-Schreier curves, and impossibility certificates.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tangotower/artin_schreier.hpp"
#include "tangotower/errors.hpp"
#include "tangotower/pbundle.hpp"
#include "tangotower/searches.hpp"
#include "tangotower/selfcheck.hpp"
#include "tangotower/tower.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaimMismatch = 1;
constexpr int kExitInputError = 2;

struct IoOptions {
  std::string input_path;
  std::string inline_json;
  std::string format = "text";
  std::string out_path;
};

void add_io_options(CLI::App* cmd, IoOptions& io, bool with_input) {
  if (with_input) {
    cmd->add_option("--input", io.input_path, "Path to the input JSON file");
    cmd->add_option("--inline", io.inline_json, "Inline input JSON");
  }
  cmd->add_option("--format", io.format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--out", io.out_path, "Write the report to this file instead of stdout");
}

nlohmann::json load_input(const IoOptions& io) {
  std::string text;
  if (!io.inline_json.empty()) {
    text = io.inline_json;
  } else if (!io.input_path.empty()) {
    std::ifstream in(io.input_path);
    if (!in) throw tango::InputError("cannot open input file '" + io.input_path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  } else {
    throw tango::InputError("no input: pass --input FILE or --inline JSON");
  }
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw tango::InputError(std::string("malformed JSON input: ") + e.what());
  }
}

void emit(const IoOptions& io, const nlohmann::json& report, const std::string& text) {
  const std::string payload = io.format == "json" ? report.dump(2) + "\n" : text;
  if (!io.out_path.empty()) {
    std::ofstream out(io.out_path);
    if (!out) throw tango::InputError("cannot open output file '" + io.out_path + "'");
    out << payload;
  } else {
    std::cout << payload;
  }
}

// ---------------------------------------------------------------- curve

int run_curve_analyze(const IoOptions& io, std::optional<long> d_request, long weight_bound) {
  const tango::ArtinSchreierCurve curve = tango::curve_from_json(load_input(io));
  const long two_g_2 = curve.two_g_minus_2();
  if (weight_bound <= 0) weight_bound = std::max(curve.p(), two_g_2 > 0 ? two_g_2 : curve.p());

  nlohmann::json report = tango::to_json(curve);
  report["m"] = curve.m();
  report["genus"] = curve.genus();
  report["two_g_minus_2"] = two_g_2;
  report["weight_bound"] = weight_bound;

  // canonical differential dx: divisor (2g-2) P_inf, cross-checked
  const tango::DifferentialReport dx = tango::differential_report(curve, tango::CurveFunction::x());
  report["dx"] = {{"v_infinity", dx.v_infinity},
                  {"finite_part_degree", dx.finite_part_degree},
                  {"total_degree", dx.total_degree}};

  std::optional<long> d = d_request;
  if (!d && two_g_2 >= curve.p() && two_g_2 % curve.p() == 0) d = two_g_2 / curve.p();
  std::ostringstream text;
  text << "curve: y^" << curve.p() << " - y = f(x), deg f = " << curve.m() << "\n"
       << "genus: " << curve.genus() << "   2g-2: " << two_g_2 << "\n";
  if (d && *d >= 1) {
    report["d"] = *d;
    const auto tango_witness = tango::is_tango(curve, *d);
    report["tango"] = tango_witness.has_value();
    if (tango_witness) report["tango_witness"] = tango::to_string(*tango_witness);
    const auto pre = tango::pre_tango_search(curve, *d, weight_bound);
    report["pre_tango"] = pre.has_value();
    if (pre) report["pre_tango_witness"] = tango::to_string(*pre);
    text << "tango with D = " << *d << " P_inf: " << (tango_witness ? "true" : "false");
    if (tango_witness) text << "  (witness " << tango::to_string(*tango_witness) << ")";
    text << "\npre-tango with D = " << *d << " P_inf: " << (pre ? "true" : "false");
    if (pre) text << "  (witness " << tango::to_string(*pre) << ")";
    text << "\n";
  }
  if (curve.genus() >= 2) {
    const tango::TangoInvariantBounds bounds = tango::tango_invariant_bounds(curve, weight_bound);
    report["tango_invariant"] = {{"lower", bounds.lower},
                                 {"upper", tango::rat_to_string(bounds.upper)},
                                 {"exact", bounds.exact}};
    if (bounds.witness) report["tango_invariant"]["witness"] = tango::to_string(*bounds.witness);
    text << "tango invariant bounds: [" << bounds.lower << ", "
         << tango::rat_to_string(bounds.upper) << "]" << (bounds.exact ? " (exact)" : "") << "\n";
  }
  emit(io, report, text.str());
  return kExitOk;
}

// ---------------------------------------------------------------- tower

int run_tower_build(const IoOptions& io, bool cover_check) {
  const nlohmann::json script = load_input(io);
  // build step by step so per-level states can be reported
  nlohmann::json levels = nlohmann::json::array();
  nlohmann::json cover_checks = nlohmann::json::array();

  nlohmann::json base_script = script;
  base_script["steps"] = nlohmann::json::array();
  tango::TowerState state = tango::run_build_script(base_script);
  levels.push_back(tango::to_json(state));

  const long p = state.p();
  if (script.contains("steps")) {
    std::size_t index = 0;
    for (const nlohmann::json& step : script["steps"]) {
      const std::string context = "step " + std::to_string(index);
      const std::string kind = step.value("kind", "");
      try {
        if (kind == "I") {
          if (!step.contains("k") || !step["k"].is_number_integer())
            throw tango::InputError(context + ": missing integer field 'k'");
          const long k = step["k"].get<long>();
          if (cover_check) {
            const long m = tango::least_ramification_multiplier(p, k);
            const tango::DivisionResult dp =
                tango::divide_exact(state.polarization(), k, tango::DivisionMode::Integral);
            if (dp.ok()) {
              const tango::SummandList summands = tango::cyclic_cover_summands(p, k, m, *dp.cls);
              const std::vector<tango::TowerClass> pushed = tango::pushforward_structure(summands);
              const tango::RelationCheck rel = tango::verify_mk_relation(p, k, m, *dp.cls);
              nlohmann::json pushed_json = nlohmann::json::array();
              for (const auto& c : pushed) pushed_json.push_back(tango::to_json(c));
              cover_checks.push_back(
                  {{"step", index},
                   {"k", k},
                   {"m", m},
                   {"tensor_power_relation", rel.ok},
                   {"summands", tango::to_json(summands)},
                   {"pushforward", std::move(pushed_json)},
                   {"structure_sheaf_certified",
                    pushed.size() == 1 && pushed[0].is_zero()}});
            }
          }
          state = tango::step_I(state, k);
        } else if (kind == "II") {
          if (!step.contains("l") || !step.contains("r"))
            throw tango::InputError(context + ": construction II needs integer fields 'l' and 'r'");
          state = tango::step_II(state, step["l"].get<long>(), step["r"].get<long>());
        } else {
          throw tango::InputError(context + ": 'kind' must be \"I\" or \"II\"");
        }
      } catch (const tango::InputError&) {
        throw;
      } catch (const tango::Error& e) {
        throw tango::InputError(context + ": " + e.what());
      }
      levels.push_back(tango::to_json(state));
      ++index;
    }
  }

  const tango::CanonicalClassification classification = tango::classify_canonical(state);
  nlohmann::json report{{"p", p},
                        {"dim", state.dim()},
                        {"levels", std::move(levels)},
                        {"final", tango::to_json(state)},
                        {"canonical_trivial", classification.trivial()},
                        {"canonical_witnesses", classification.report.witnesses}};
  if (cover_check) report["cover_checks"] = std::move(cover_checks);

  std::ostringstream text;
  text << "tower over p = " << p << ", dim " << state.dim() << ", " << state.steps().size()
       << " step(s)\n"
       << "canonical:    " << tango::to_string(state.canonical()) << "\n"
       << "polarization: " << tango::to_string(state.polarization()) << "\n"
       << "flag: " << tango::to_string(state.tango()) << "\n"
       << "canonical trivial: " << (classification.trivial() ? "yes" : "no");
  if (!classification.trivial()) {
    text << "  (witness coordinates:";
    for (const auto& w : classification.report.witnesses) text << " " << w;
    text << ")";
  }
  text << "\n";
  emit(io, report, text.str());
  return kExitOk;
}

// ---------------------------------------------------------------- cover

int run_cover_check(const IoOptions& io, long p, long k, long m, const std::string& dprime_json) {
  if (m <= 0) m = tango::least_ramification_multiplier(p, k);
  tango::TowerClass d_prime = tango::TowerClass::base_degree(tango::Rat(1));
  if (!dprime_json.empty()) {
    try {
      d_prime = tango::tower_class_from_json(nlohmann::json::parse(dprime_json));
    } catch (const nlohmann::json::parse_error& e) {
      throw tango::InputError(std::string("malformed --dprime JSON: ") + e.what());
    }
  }
  const tango::RelationCheck rel = tango::verify_mk_relation(p, k, m, d_prime);
  const tango::SummandList summands = tango::cyclic_cover_summands(p, k, m, d_prime);
  const std::vector<tango::TowerClass> pushed = tango::pushforward_structure(summands);
  nlohmann::json pushed_json = nlohmann::json::array();
  for (const auto& c : pushed) pushed_json.push_back(tango::to_json(c));
  const bool certified = pushed.size() == 1 && pushed[0].is_zero();
  nlohmann::json report{{"p", p},
                        {"k", k},
                        {"m", m},
                        {"d_prime", tango::to_json(d_prime)},
                        {"tensor_power_relation", rel.ok},
                        {"relation_residual", tango::to_json(rel.residual)},
                        {"summands", tango::to_json(summands)},
                        {"pushforward", std::move(pushed_json)},
                        {"structure_sheaf_certified", certified}};
  std::ostringstream text;
  text << "cover (p, k, m) = (" << p << ", " << k << ", " << m << ")\n"
       << "tensor-power relation: " << (rel.ok ? "holds" : "VIOLATED") << "\n"
       << "summand F-twists:";
  for (const auto& s : summands) text << " " << tango::rat_to_string(s.a);
  text << "\npushforward certifies structure sheaf: " << (certified ? "yes" : "no") << "\n";
  emit(io, report, text.str());
  return certified && rel.ok ? kExitOk : kExitClaimMismatch;
}

// ----------------------------------------------------- verify-corollaries

int run_replay(const IoOptions& io, const std::string& replay_path) {
  std::ifstream in(replay_path);
  if (!in) throw tango::InputError("cannot open certificate file '" + replay_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw tango::InputError(std::string("malformed certificate JSON: ") + e.what());
  }
  if (!j.contains("certificates") || !j["certificates"].is_array())
    throw tango::InputError("certificate file: missing 'certificates' array");
  bool all_ok = true;
  nlohmann::json results = nlohmann::json::array();
  std::ostringstream text;
  for (const auto& cj : j["certificates"]) {
    const tango::Certificate cert = tango::Certificate::from_json(cj);
    const bool ok = tango::replay_certificate(cert);
    all_ok = all_ok && ok;
    results.push_back({{"claim", cert.claim}, {"replayed", ok}});
    text << cert.claim << ": " << (ok ? "replay ok" : "REPLAY FAILED") << "\n";
  }
  text << (all_ok ? "all certificates replayed" : "replay mismatch") << "\n";
  emit(io, nlohmann::json{{"replayed_file", replay_path}, {"results", std::move(results)},
                          {"all_replayed", all_ok}},
       text.str());
  return all_ok ? kExitOk : kExitClaimMismatch;
}

int run_verify_corollaries(const IoOptions& io, const tango::SearchBounds& bounds, int workers,
                           const std::string& json_out) {
  const tango::CorollaryRun run = tango::verify_corollaries(bounds, workers);
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& cert : run.certificates) certs.push_back(cert.to_json());
  nlohmann::json report{{"bounds",
                         {{"p_max", bounds.p_max},
                          {"k_max", bounds.k_max},
                          {"l_max", bounds.l_max},
                          {"r_max", bounds.r_max}}},
                        {"certificates", std::move(certs)},
                        {"all_expected", run.all_expected},
                        {"mismatches", run.mismatches}};
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    if (!out) throw tango::InputError("cannot open output file '" + json_out + "'");
    out << report.dump(2) << "\n";
  }
  std::ostringstream text;
  for (const auto& cert : run.certificates) {
    text << cert.claim << ": " << cert.verdict << "  [solutions: " << cert.solutions.dump()
         << "]\n";
  }
  text << (run.all_expected ? "all 4 claims reproduced" : "CLAIM MISMATCH") << "\n";
  for (const auto& m : run.mismatches) text << "  mismatch: " << m << "\n";
  emit(io, report, text.str());
  return run.all_expected ? kExitOk : kExitClaimMismatch;
}

// ---------------------------------------------------------------- selftest

int run_selftest(const IoOptions& io, std::uint64_t seed, int rounds) {
  tango::SelfCheckResult result = tango::run_self_checks({seed, rounds});
  std::ostringstream text;
  for (const auto& check : result.report["checks"]) {
    text << (check["passed"].get<bool>() ? "PASS" : "FAIL") << "  "
         << check["name"].get<std::string>() << "  (" << check["cases"].get<long>() << " cases)";
    const std::string detail = check["detail"].get<std::string>();
    if (!detail.empty()) text << "  " << detail;
    text << "\n";
  }
  text << (result.all_passed ? "selftest passed" : "selftest FAILED") << "\n";
  emit(io, result.report, text.str());
  return result.all_passed ? kExitOk : kExitClaimMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact divisor-class arithmetic on iterated cyclic-cover towers,\n"
               "Tango-structure verification on Artin-Schreier curves, and\n"
               "machine-checkable impossibility certificates."};
  app.require_subcommand(1);

  // curve analyze
  CLI::App* curve = app.add_subcommand("curve", "Artin-Schreier curve computations");
  curve->require_subcommand(1);
  CLI::App* analyze = curve->add_subcommand("analyze", "Genus, valuations and Tango verdicts");
  IoOptions curve_io;
  long curve_d = -1;
  long curve_wb = -1;
  add_io_options(analyze, curve_io, true);
  analyze->add_option("--d", curve_d, "Tango degree to test (default: (2g-2)/p when integral)");
  analyze->add_option("--weight-bound", curve_wb, "Search bound for justification weights");

  // tower build
  CLI::App* tower = app.add_subcommand("tower", "Inductive tower construction");
  tower->require_subcommand(1);
  CLI::App* build = tower->add_subcommand("build", "Run a tower build script");
  IoOptions tower_io;
  bool cover_check = false;
  add_io_options(build, tower_io, true);
  build->add_flag("--cover-check", cover_check,
                  "Also run the cover-summand pushforward checks per step");

  // cover check
  CLI::App* cover = app.add_subcommand("cover", "Cyclic-cover sheaf algebra");
  cover->require_subcommand(1);
  CLI::App* check = cover->add_subcommand("check", "Summands, tensor-power relation, pushforward");
  IoOptions cover_io;
  long cover_p = 0, cover_k = 0, cover_m = 0;
  std::string cover_dprime;
  add_io_options(check, cover_io, false);
  check->add_option("--p", cover_p, "Characteristic (prime)")->required();
  check->add_option("--k", cover_k, "Cover degree")->required();
  check->add_option("--m", cover_m, "Ramification multiplier (default: least with k | p+m)");
  check->add_option("--dprime", cover_dprime, "D' as divisor-class JSON (default: D'1)");

  // verify-corollaries
  CLI::App* verify = app.add_subcommand("verify-corollaries",
                                        "Reproduce the impossibility and feasibility claims");
  IoOptions verify_io;
  tango::SearchBounds bounds;
  int workers = 0;
  std::string json_out;
  std::string replay_path;
  add_io_options(verify, verify_io, false);
  verify->add_option("--p-max", bounds.p_max, "Prime bound");
  verify->add_option("--k-max", bounds.k_max, "Cover-degree bound");
  verify->add_option("--l-max", bounds.l_max, "Frobenius exponent bound");
  verify->add_option("--r-max", bounds.r_max, "Coprime part bound");
  verify->add_option("--workers", workers, "Parallel workers (0 = auto)");
  verify->add_option("--json", json_out, "Also write the certificate JSON to this file");
  verify->add_option("--replay", replay_path,
                     "Re-check a previously written certificate file instead of searching");

  // selftest
  CLI::App* selftest = app.add_subcommand("selftest", "Seeded randomized property suite");
  IoOptions selftest_io;
  std::uint64_t seed = 1;
  int rounds = 200;
  add_io_options(selftest, selftest_io, false);
  selftest->add_option("--seed", seed, "Random seed");
  selftest->add_option("--rounds", rounds, "Rounds per property")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (analyze->parsed())
      return run_curve_analyze(curve_io, curve_d >= 1 ? std::optional<long>(curve_d) : std::nullopt,
                               curve_wb);
    if (build->parsed()) return run_tower_build(tower_io, cover_check);
    if (check->parsed()) return run_cover_check(cover_io, cover_p, cover_k, cover_m, cover_dprime);
    if (verify->parsed()) {
      if (!replay_path.empty()) return run_replay(verify_io, replay_path);
      return run_verify_corollaries(verify_io, bounds, workers, json_out);
    }
    if (selftest->parsed()) return run_selftest(selftest_io, seed, rounds);
  } catch (const tango::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitInputError;
  }
  std::cerr << "error: no subcommand\n";
  return kExitInputError;
}
