// SPDX-License-Identifier: MIT
#include "kls/runner.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace kls;
using nlohmann::json;

namespace {

json relaxation_json() {
  return json::parse(R"({
    "name": "relax",
    "problem": "point",
    "program": {"kind": "PureShear", "displacement": [[0, 0], [0, 0.1], [1.5, 0.1], [1.5, 0.2], [3, 0.2], [4, 0], [5, 0]]},
    "material": {
      "elastic": [{"model": "NeoHookeanMembrane", "mu": 3.0, "K": 0.0}],
      "branches": [{"membrane": "NeoHookeanMembrane", "mu1": 3.0, "K1": 1.0, "eta_s": 1.0}]
    },
    "time": {"dt": 0.1, "t_end": 5.0},
    "sweep": {"eta": [0.1, 10.0], "elastic": {"elastic": [{"model": "NeoHookeanMembrane", "mu": 3.0}]}}
  })");
}

ErrorKind kind_of(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("configuration was accepted");
  return ErrorKind::UndefinedError;
}

std::string message_of(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::string csv(const Table& t) {
  std::ostringstream os;
  t.write_csv(os);
  return os.str();
}

}  // namespace

TEST_CASE("configuration round-trips through the serializer") {
  const ScenarioConfig c = parse_config(relaxation_json());
  const json once = to_json(c);
  const json twice = to_json(parse_config(once));
  CHECK(once == twice);
  CHECK(c.problem == Problem::Point);
  CHECK(c.material.branches.at(0).K1 == 1.0);
  CHECK(c.sweep.elastic.has_value());
  CHECK(c.program.displacement(2.0) == doctest::Approx(0.2));
}

TEST_CASE("problem parameters are completed with defaults") {
  const ScenarioConfig c = parse_config(json::parse(R"({"name": "b", "problem": "balloon",
      "parameters": {"eta_s": 0.2}, "time": {"dt": 0.01, "t_end": 1}})"));
  CHECK(c.param("eta_s") == 0.2);
  CHECK(c.param("lambda_end") == parameter_defaults(Problem::Balloon).at("lambda_end"));
}

TEST_CASE("schema errors name the offending field") {
  json j = relaxation_json();
  j["time"]["dt"] = -0.1;
  CHECK(kind_of(j) == ErrorKind::SchemaError);
  CHECK(message_of(j).find("time.dt") != std::string::npos);

  j = relaxation_json();
  j["material"]["branches"][0]["membrane"] = "Rubber";
  CHECK(message_of(j).find("material.branches[0].membrane") != std::string::npos);

  j = relaxation_json();
  j["material"]["elastic"][0]["nu"] = 0.3;
  CHECK(message_of(j).find("material.elastic[0]") != std::string::npos);

  j = relaxation_json();
  j.erase("program");
  CHECK(message_of(j).find("program") != std::string::npos);

  j = relaxation_json();
  j["problem"] = "teapot";
  CHECK(kind_of(j) == ErrorKind::SchemaError);

  j = relaxation_json();
  j["parameters"] = {{"R", 2.0}};
  CHECK(message_of(j).find("parameters.R") != std::string::npos);
}

TEST_CASE("missing configuration files are input errors") {
  try {
    load_config("/nonexistent/config.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
    CHECK(exit_code(e.kind()) == 6);
  }
  CHECK(exit_code(ErrorKind::SchemaError) == 2);
  CHECK(exit_code(ErrorKind::ParameterError) == 3);
  CHECK(exit_code(ErrorKind::SolverDivergence) == 4);
  CHECK(exit_code(ErrorKind::UnsupportedStudy) == 5);
}

TEST_CASE("point runs start at the reference state and are deterministic") {
  const ScenarioConfig c = parse_config(relaxation_json());
  const RunResult a = run_case(c), b = run_case(c);
  const Table& s = a.table("series");
  CHECK(s.rows.size() == 51);
  CHECK(s.values("t").front() == 0.0);
  CHECK(s.values("sigma22").front() == 0.0);
  CHECK(csv(s) == csv(b.table("series")));
}

TEST_CASE("relaxation sweep orders the viscosities") {
  const RunResult r = parameter_sweep(parse_config(relaxation_json()));
  const Table& s = r.table("sweep");
  const auto el = s.values("sigma22[elastic]"), lo = s.values("sigma22[eta=0.1]"), hi = s.values("sigma22[eta=10]");
  // Right after the first load jump the stiffer, more viscous response is larger.
  CHECK(hi[1] > lo[1]);
  CHECK(lo[1] > el[1]);
  // During the hold the low-viscosity branch has relaxed onto the elastic curve.
  CHECK(std::abs(lo[14] - el[14]) < 1e-3 * std::abs(el[14]));
}

TEST_CASE("studies are limited to problems with closed-form solutions") {
  try {
    convergence_study(parse_config(relaxation_json()));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedStudy);
  }
}

TEST_CASE("balloon study recovers first order in the time step") {
  const ScenarioConfig c = parse_config(json::parse(R"({"name": "b", "problem": "balloon",
      "time": {"dt": 0.01, "t_end": 1}, "study": {"dt": [0.1, 0.01, 0.001]}})"));
  const RunResult r = convergence_study(c);
  CHECK(r.summary["balloon_dt"]["order"].get<double>() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("results are written as csv and json") {
  const ScenarioConfig c = parse_config(relaxation_json());
  const auto dir = std::filesystem::temp_directory_path() / "kls_test_config_out";
  std::filesystem::remove_all(dir);
  write_result(dir.string(), c, run_case(c));
  CHECK(std::filesystem::exists(dir / "series.csv"));
  std::ifstream in(dir / "config.json");
  CHECK(to_json(parse_config(json::parse(in))) == to_json(c));
  std::filesystem::remove_all(dir);
}
