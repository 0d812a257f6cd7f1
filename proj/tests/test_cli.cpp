#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef TANGOTOWER_CLI_PATH
#error "TANGOTOWER_CLI_PATH must be defined"
#endif
#ifndef TANGOTOWER_TEST_TMPDIR
#error "TANGOTOWER_TEST_TMPDIR must be defined"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunResult run_cli(const std::string& args) {
  const std::string dir = TANGOTOWER_TEST_TMPDIR;
  const std::string out_path = dir + "/cli_stdout.txt";
  const std::string err_path = dir + "/cli_stderr.txt";
  const std::string command = std::string(TANGOTOWER_CLI_PATH) + " " + args + " >" + out_path +
                              " 2>" + err_path;
  const int status = std::system(command.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string(TANGOTOWER_TEST_TMPDIR) + "/" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("curve analyze reports tango verdicts") {
  const RunResult r =
      run_cli("curve analyze --inline '{\"p\":3,\"f\":[0,0,0,0,0,1]}' --d 2 --format json");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["genus"] == 4);
  CHECK(j["two_g_minus_2"] == 6);
  CHECK(j["tango"] == true);
  CHECK(j["tango_witness"] == "x");
  CHECK(j["tango_invariant"]["lower"] == 2);
  CHECK(j["tango_invariant"]["upper"] == "2");
  CHECK(j["tango_invariant"]["exact"] == true);

  // 2g-2 = 2 < pd = 4: not tango
  const RunResult r2 =
      run_cli("curve analyze --inline '{\"p\":2,\"f\":[0,0,0,0,0,1]}' --d 2 --format json");
  CHECK(r2.exit_code == 0);
  CHECK(nlohmann::json::parse(r2.out)["tango"] == false);
}

TEST_CASE("curve analyze rejects bad input with exit 2") {
  // gcd(deg f, p) != 1
  const RunResult gcd = run_cli("curve analyze --inline '{\"p\":3,\"f\":[0,0,0,1]}'");
  CHECK(gcd.exit_code == 2);
  CHECK(gcd.err.find("gcd") != std::string::npos);

  const RunResult malformed = run_cli("curve analyze --inline '{not-json'");
  CHECK(malformed.exit_code == 2);

  const RunResult unknown = run_cli("curve analyze --inline '{\"p\":3,\"f\":[0,1],\"zz\":1}'");
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.err.find("unknown field") != std::string::npos);

  const RunResult missing = run_cli("curve analyze");
  CHECK(missing.exit_code == 2);

  const RunResult no_file = run_cli("curve analyze --input /nonexistent/curve.json");
  CHECK(no_file.exit_code == 2);
}

TEST_CASE("tower build emits per-level classes") {
  const std::string script = write_temp(
      "tower_script.json",
      R"({"p": 3, "base": {"degD": 2, "k1": 2, "tango": true}, "steps": [{"kind": "I", "k": 2}]})");
  const RunResult r = run_cli("tower build --input " + script + " --format json");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["levels"].size() == 2);
  CHECK(j["final"]["canonical"]["d"] == "5");
  CHECK(j["final"]["canonical"]["f"][0] == "0");
  CHECK(j["final"]["tango"] == "Tango");
  CHECK(j["canonical_trivial"] == false);
}

TEST_CASE("tower build certifies the trivial-canonical synthetic surface") {
  const std::string script = write_temp("synthetic.json",
                                        R"({"p": 2,
    "base": {"dim": 2, "canonical_d": "1", "polarization_d": "3", "tango": true},
    "steps": [{"kind": "I", "k": 3}]})");
  const RunResult r = run_cli("tower build --input " + script + " --format json --cover-check");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["canonical_trivial"] == true);
  REQUIRE(j["cover_checks"].size() == 1);
  CHECK(j["cover_checks"][0]["structure_sheaf_certified"] == true);
  CHECK(j["cover_checks"][0]["tensor_power_relation"] == true);
}

TEST_CASE("tower build aborts on a bad step with exit 2 and the offending index") {
  const std::string script = write_temp(
      "bad_step.json",
      R"({"p": 3, "base": {"degD": 2, "k1": 2, "tango": true}, "steps": [{"kind": "I", "k": 3}]})");
  const RunResult r = run_cli("tower build --input " + script);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("step 0") != std::string::npos);
  CHECK(r.err.find("(p, k) = 1") != std::string::npos);
}

TEST_CASE("cover check prints the summand table") {
  const RunResult r = run_cli("cover check --p 2 --k 3 --format json");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["m"] == 1);
  CHECK(j["tensor_power_relation"] == true);
  CHECK(j["summands"].size() == 3);
  CHECK(j["summands"][2]["a"] == "-2");
  CHECK(j["structure_sheaf_certified"] == true);

  const RunResult bad = run_cli("cover check --p 2 --k 4");
  CHECK(bad.exit_code == 2);  // gcd(2,4) != 1
}

TEST_CASE("verify-corollaries exits 0 and writes schema-stable JSON") {
  const std::string out = std::string(TANGOTOWER_TEST_TMPDIR) + "/certs.json";
  const RunResult r = run_cli("verify-corollaries --json " + out);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("all 4 claims reproduced") != std::string::npos);
  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  REQUIRE(j["certificates"].size() == 4);
  CHECK(j["all_expected"] == true);
  for (const auto& cert : j["certificates"]) {
    CHECK(cert.contains("claim"));
    CHECK(cert.contains("verdict"));
    CHECK(cert.contains("trace"));
    CHECK(cert.contains("solutions"));
  }
  // larger bounds, identical verdicts
  const RunResult big = run_cli("verify-corollaries --p-max 499");
  CHECK(big.exit_code == 0);
}

TEST_CASE("verify-corollaries --replay accepts genuine and rejects tampered certificates") {
  const std::string out = std::string(TANGOTOWER_TEST_TMPDIR) + "/replay.json";
  REQUIRE(run_cli("verify-corollaries --json " + out).exit_code == 0);
  CHECK(run_cli("verify-corollaries --replay " + out).exit_code == 0);

  nlohmann::json j = nlohmann::json::parse(slurp(out));
  j["certificates"][0]["trace"][0]["holds"] =
      !j["certificates"][0]["trace"][0]["holds"].get<bool>();
  const std::string tampered = write_temp("tampered.json", j.dump());
  const RunResult r = run_cli("verify-corollaries --replay " + tampered);
  CHECK(r.exit_code == 1);  // claim mismatch
}

TEST_CASE("identical seeds give byte-identical reports") {
  const std::string a = std::string(TANGOTOWER_TEST_TMPDIR) + "/self_a.json";
  const std::string b = std::string(TANGOTOWER_TEST_TMPDIR) + "/self_b.json";
  CHECK(run_cli("selftest --seed 42 --rounds 60 --format json --out " + a).exit_code == 0);
  CHECK(run_cli("selftest --seed 42 --rounds 60 --format json --out " + b).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());

  const std::string c1 = std::string(TANGOTOWER_TEST_TMPDIR) + "/certs1.json";
  const std::string c2 = std::string(TANGOTOWER_TEST_TMPDIR) + "/certs2.json";
  CHECK(run_cli("verify-corollaries --json " + c1).exit_code == 0);
  CHECK(run_cli("verify-corollaries --json " + c2).exit_code == 0);
  CHECK(slurp(c1) == slurp(c2));
}

TEST_CASE("unknown options and subcommands exit 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("curve analyze --no-such-flag 1").exit_code == 2);
}
