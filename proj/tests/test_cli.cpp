#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dampreg/cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace dampreg;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dampreg");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dampreg_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const char* kCircular = R"({
  "schema_version": 1,
  "system": "AutonomousKepler2D",
  "params": {"m": 1.0, "k": 1.0, "lambda": 0.0},
  "initial_conditions": {"position": [1.0, 0.0], "velocity": [0.0, 1.0]},
  "integrator": {"h_max": 0.1, "t_end": 12.566370614359172},
  "outputs": ["script_e", "ang_mom", "radius"]
})";

const char* kRadial = R"({
  "schema_version": 1,
  "system": "DampedKepler2D",
  "params": {"lambda": 0.01},
  "initial_conditions": {"position": [1.0, 0.0], "velocity": [0.0, 0.0]},
  "integrator": {"t_end": 5.0, "h_max": 0.1}
})";

}  // namespace

TEST_CASE("scenario parsing") {
  const ScenarioConfig c = parse_scenario(kCircular);
  CHECK(c.system == SystemId::AutonomousKepler2D);
  CHECK(c.integrator.t_end == doctest::Approx(12.566370614359172));
  CHECK(c.outputs == std::vector<std::string>{"script_e", "ang_mom", "radius"});
  CHECK(trajectory_columns(c) == std::vector<std::string>{"t", "q1", "q2", "v1", "v2", "script_e", "ang_mom", "radius"});

  std::string unknown = kCircular;
  unknown.insert(unknown.rfind('}'), R"(, "foo": 1)");
  CHECK_THROWS_WITH_AS(parse_scenario(unknown), doctest::Contains("foo"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario("{\n  \"schema_version\": 1,\n  \"system\": ]"), doctest::Contains("line 3"),
                       ConfigError);
  std::string wrong_dim = kCircular;
  wrong_dim.replace(wrong_dim.find("[1.0, 0.0]"), 10, "[1.0, 0.0, 0.0]");
  CHECK_THROWS_AS(parse_scenario(wrong_dim), ConfigError);
  std::string version = kCircular;
  version.replace(version.find("\"schema_version\": 1"), 19, "\"schema_version\": 2");
  CHECK_THROWS_WITH_AS(parse_scenario(version), doctest::Contains("schema_version"), ConfigError);
}

TEST_CASE("regularized scenarios derive script_e from the initial state") {
  const ScenarioConfig c = parse_scenario(R"({
    "schema_version": 1, "system": "RegularizedKS",
    "initial_conditions": {"position": [1, 0, 0, 0], "velocity": [0, 0, 0, 0]},
    "integrator": {"t_end": 1.0}
  })");
  CHECK(c.context().script_e == doctest::Approx(1.0));
  CHECK(c.initial_state().size() == 9);
}

TEST_CASE("exit codes") {
  CHECK(exit_code(Status::Completed) == 0);
  CHECK(exit_code(Status::CollisionAbort) == 2);
  CHECK(exit_code(Status::StepUnderflow) == 2);
  CHECK(exit_code(Status::MaxSteps) == 2);
}

TEST_CASE("simulate") {
  const fs::path dir = scratch("simulate");
  SUBCASE("circular orbit") {
    const fs::path cfg = write(dir, "circular.json", kCircular);
    const Run r = cli({"simulate", cfg.string(), "-o", (dir / "a").string()});
    REQUIRE(r.code == 0);
    const auto summary = nlohmann::json::parse(slurp(dir / "a" / "summary.json"));
    CHECK(summary.at("status") == "Completed");
    const auto columns = summary.at("columns").get<std::vector<std::string>>();
    std::istringstream csv(slurp(dir / "a" / "trajectory.csv"));
    std::string header, line;
    std::getline(csv, header);
    std::string joined;
    for (const auto& c : columns) joined += (joined.empty() ? "" : ",") + c;
    CHECK(header == joined);
    std::size_t rows = 0;
    double e_min = 1e300, e_max = -1e300;
    while (std::getline(csv, line)) {
      ++rows;
      std::vector<double> cells;
      std::istringstream ls(line);
      for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(std::stod(cell));
      REQUIRE(cells.size() == columns.size());
      e_min = std::min(e_min, cells[5]);
      e_max = std::max(e_max, cells[5]);
    }
    CHECK(rows == summary.at("samples").get<std::size_t>());
    CHECK(e_max - e_min < 1e-9);
    CHECK(summary.at("drifts").at("script_e").at("max_rel").get<double>() < 1e-9);

    // Byte-identical on rerun.
    REQUIRE(cli({"simulate", cfg.string(), "-o", (dir / "b").string()}).code == 0);
    CHECK(slurp(dir / "a" / "trajectory.csv") == slurp(dir / "b" / "trajectory.csv"));
    CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
  }
  SUBCASE("radial collision") {
    const fs::path cfg = write(dir, "radial.json", kRadial);
    const Run r = cli({"simulate", cfg.string(), "-o", (dir / "c").string()});
    CHECK(r.code == 2);
    const auto summary = nlohmann::json::parse(slurp(dir / "c" / "summary.json"));
    CHECK(summary.at("status") == "CollisionAbort");
  }
  SUBCASE("config errors") {
    std::string text = kCircular;
    text.insert(text.rfind('}'), R"(, "foo": 1)");
    const Run r = cli({"simulate", write(dir, "foo.json", text).string(), "-o", (dir / "d").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("foo") != std::string::npos);
    CHECK(cli({"simulate", (dir / "missing.json").string(), "-o", (dir / "e").string()}).code == 1);
  }
  fs::remove_all(dir);
}

TEST_CASE("verify") {
  const fs::path dir = scratch("verify");
  const Run none = cli({"verify", "--filter", "no_such_check", "-o", (dir / "r.json").string()});
  CHECK(none.code == 1);
  CHECK(none.err.find("no checks matched") != std::string::npos);

  const Run ok = cli({"--quiet", "verify", "--filter", "algebra.", "-o", (dir / "r.json").string()});
  CHECK(ok.code == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "r.json"));
  REQUIRE(report.is_array());
  CHECK_FALSE(report.empty());
  for (const auto& e : report) {
    CHECK(e.at("pass") == true);
    CHECK(e.contains("name"));
    CHECK(e.contains("kind"));
    CHECK(e.contains("measured"));
    CHECK(e.contains("tolerance"));
    CHECK(e.contains("seconds"));
  }
  fs::remove_all(dir);
}

TEST_CASE("transform") {
  CHECK(nlohmann::json::parse(run_transform(
            R"({"schema_version": 1, "transform": "ks_forward", "input": {"u": [1, 0, 0, 0]}})"))
            .at("result") == nlohmann::json::array({1.0, 0.0, 0.0}));
  CHECK(nlohmann::json::parse(
            run_transform(R"({"schema_version": 1, "transform": "lc_forward", "input": {"u": [1, 1]}})"))
            .at("result") == nlohmann::json::array({0.0, 2.0}));
  CHECK(nlohmann::json::parse(run_transform(R"({"schema_version": 1, "transform": "bilinear",
            "input": {"u": [1, 0, 0, 0], "u_prime": [0, 0, 0, 1]}})"))
            .at("result") == 1.0);
  CHECK_THROWS_AS(run_transform(R"({"schema_version": 1, "transform": "nope", "input": {}})"), ConfigError);

  const fs::path dir = scratch("transform");
  const Run bad = cli({"transform", write(dir, "t.json", R"({"schema_version": 1, "transform": "nope", "input": {}})").string()});
  CHECK(bad.code == 1);
  const Run good = cli({"transform", write(dir, "u.json",
                        R"({"schema_version": 1, "transform": "ks_forward", "input": {"u": [1, 0, 0, 0]}})").string()});
  CHECK(good.code == 0);
  CHECK(nlohmann::json::parse(good.out).at("result") == nlohmann::json::array({1.0, 0.0, 0.0}));
  fs::remove_all(dir);
}
