#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "eur/error.hpp"
#include "eur/state_json.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace eur;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  json doc;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  json doc;
  if (!out.str().empty() && out.str().front() == '{') doc = json::parse(out.str());
  return {code, doc, err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("eur_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("state json round trip for every family") {
  const std::vector<std::string> docs = {
      R"({"family": "grid", "grid": {"n": 8, "x_min": -1, "x_max": 1}, "amplitudes": [0, 0.1, [0.5, 0.5], 1, 1, 0.5, 0.1, 0]})",
      R"({"family": "periodic", "first_level": -1, "amplitudes": [1, [0, 1], 1]})",
      R"({"family": "fock", "matrix": [[0.5, 0], [0, 0.5]]})",
      R"({"family": "finite", "amplitudes": [1, 0, [0, 1]]})",
  };
  for (const auto& text : docs) {
    const AnyState a = parse_state(text);
    const auto dumped = state_to_json(a).dump();
    const AnyState b = parse_state(dumped);
    CHECK(family_name(a) == family_name(b));
    CHECK(state_to_json(b).dump() == dumped);
  }
  const auto f = std::get<FiniteState>(parse_state(docs[3]));
  CHECK(f.dimension() == 3);
}

TEST_CASE("state json reports syntax errors with a position") {
  try {
    parse_state("{\"family\": \"finite\",\n  \"amplitudes\": [1,, 2]}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 20);
  }
  CHECK_THROWS_AS(parse_state(R"({"family": "grid", "amplitudes": [1]})"), ParseError);
  CHECK_THROWS_AS(parse_state(R"({"family": "finite", "amplitudes": [1], "matrix": [[1]]})"), ParseError);
  CHECK_THROWS_AS(parse_state(R"({"family": "finite", "amplitudes": [[1, 2, 3]]})"), ParseError);
}

TEST_CASE("exit codes") {
  CHECK(run({"--help"}).code == cli::kPass);
  CHECK(run({}).code == cli::kParseError);
  CHECK(run({"verify", "--grid-n", "not-a-number"}).code == cli::kParseError);
  CHECK(run({"verify", temp_file("bad.json", "{\"family\": ")}).code == cli::kParseError);
  CHECK(run({"verify", "/nonexistent/state.json"}).code == cli::kParseError);

  const auto finite = temp_file("finite.json", R"({"family": "finite", "amplitudes": [1, 1]})");
  const Outcome wrong = run({"verify", finite, "--relation", "xp"});
  CHECK(wrong.code == cli::kComputationError);
  CHECK(wrong.err.find("UnsupportedObservable") != std::string::npos);
}

TEST_CASE("verify a state file with the default relation") {
  const Outcome r = run({"verify", temp_file("fock.json", R"({"family": "fock", "amplitudes": [0.6, 0.8]})")});
  CHECK(r.code == cli::kPass);
  REQUIRE(r.doc["reports"].size() == 1);
  CHECK(r.doc["reports"][0]["relation"] == "phase-number");
  CHECK(r.doc["passed"] == true);
}

TEST_CASE("seeded suite is deterministic and complete") {
  const Outcome a = run({"verify", "--suite", "gaussian-random", "--n", "4", "--seed", "7"});
  const Outcome b = run({"--seed", "7", "verify", "--suite", "gaussian-random", "--n", "4"});
  CHECK(a.code == cli::kPass);
  CHECK(a.doc["summary"]["total"] == 8);
  CHECK(a.doc.dump() == b.doc.dump());
  CHECK(run({"verify", "--suite", "gaussian-random", "--n", "4", "--seed", "8"}).doc.dump() != a.doc.dump());
}

TEST_CASE("energy-bound bouncer coefficients") {
  const Outcome r = run({"energy-bound", "--model", "bouncer"});
  CHECK(r.code == cli::kPass);
  const auto& entropic = r.doc["reports"][0];
  CHECK(entropic["kind"] == "entropic");
  CHECK(entropic["terms"]["coefficient"].get<double>() ==
        doctest::Approx(1.5 * std::cbrt(oracle::pi / (2 * std::exp(1.0)))).epsilon(1e-9));
  CHECK(entropic["terms"]["comparison_coefficient"].get<double>() == doctest::Approx(1.856).epsilon(1e-3));
}

TEST_CASE("mub sum rule in dimension three") {
  const Outcome r = run({"mub", "--d", "3", "--state", "random", "--seed", "1"});
  CHECK(r.code == cli::kPass);
  CHECK(r.doc["bases"].size() == 4);
  CHECK(r.doc["report"]["lhs"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("signal csv through the command line") {
  std::ostringstream csv;
  csv.precision(17);
  csv << "t,re,im\n";
  for (int k = 0; k < 1024; ++k) {
    const double t = -20.0 + 40.0 * k / 1023.0;
    const double env = std::exp(-t * t / 4);
    csv << t << "," << env * std::cos(4 * t) << "," << env * std::sin(4 * t) << "\n";
  }
  const Outcome r = run({"signal", temp_file("pulse.csv", csv.str())});
  CHECK(r.code == cli::kPass);
  CHECK(r.doc["report"]["verdict"] == "equality");

  const Outcome bad = run({"signal", temp_file("bad.csv", "t,re,im\n0,1,0\n1,x,0\n")});
  CHECK(bad.code == cli::kParseError);
  CHECK(bad.err.find("line 3") != std::string::npos);
}

TEST_CASE("output file option") {
  const auto path = (std::filesystem::temp_directory_path() / "eur_cli_out.json").string();
  std::filesystem::remove(path);
  std::ostringstream out, err;
  CHECK(cli::run({"mub", "--d", "2", "--out", path}, out, err) == cli::kPass);
  CHECK(out.str().empty());
  std::ifstream in(path);
  CHECK(json::parse(in)["command"] == "mub");
}
