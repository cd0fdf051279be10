#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "specstab/lab/config.hpp"
#include "specstab/lab/runner.hpp"
#include "specstab/lab/scenarios.hpp"

using namespace specstab;
using namespace specstab::lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("specstab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
  std::vector<const char*> argv{"stability_lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

}  // namespace

TEST(Config, Defaults) {
  const RunConfig c = parse_config("{}");
  EXPECT_EQ(c.scenario, "rectangle_family");
  EXPECT_EQ(c.n, 5);
  EXPECT_DOUBLE_EQ(c.h, 0.02);
  EXPECT_EQ(c.deltas, (std::vector<double>{0.01, 0.02, 0.04, 0.08}));
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, MalformedJsonNamesLine) {
  try {
    parse_config("{\n  \"n\": 5,\n  \"h\": ,\n}");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, FieldErrorsNameTheField) {
  auto message = [](const std::string& text) {
    try {
      validate(parse_config(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(R"({"n": "five"})").find("field 'n'"), std::string::npos);
  EXPECT_NE(message(R"({"kind": "robin"})").find("field 'kind'"), std::string::npos);
  EXPECT_NE(message(R"({"deltas": [0.02, 0.01]})").find("deltas[1]"), std::string::npos);
  EXPECT_NE(message(R"({"h": 0})").find("field 'h'"), std::string::npos);
  EXPECT_NE(message(R"({"colour": 1})").find("unknown field"), std::string::npos);
  EXPECT_NE(message(R"({"scenario": "nope"})").find("unknown scenario"), std::string::npos);
  EXPECT_NE(message(R"({"scenario": "custom"})").find("field 'domain'"), std::string::npos);
  EXPECT_NE(message(R"({"domain": {"outer": [[0, 0], [1, 1]]}})").find("field 'domain'"), std::string::npos);
}

TEST(Config, RoundTrip) {
  RunConfig c;
  c.scenario = "sector_decay";
  c.kind = BoundaryKind::Neumann;
  c.tolerances["sector_energy"] = 0.04;
  const RunConfig r = parse_config(config_to_json(c));
  EXPECT_EQ(r.scenario, c.scenario);
  EXPECT_EQ(r.kind, c.kind);
  EXPECT_EQ(r.tolerances, c.tolerances);
  EXPECT_DOUBLE_EQ(tolerance(r, "sector_energy", 1.0), 0.04);
  EXPECT_DOUBLE_EQ(tolerance(r, "missing", 1.0), 1.0);
}

TEST(Scenarios, ListedWithDescriptions) {
  std::ostringstream os;
  list_scenarios(os);
  for (const char* name : {"rectangle_family", "shifted_square", "sawtooth_lipschitz", "reifenberg_wiggle",
                           "sector_decay", "covering_demo", "custom"}) {
    EXPECT_NE(os.str().find(name), std::string::npos) << name;
    ASSERT_NE(find_scenario(name), nullptr);
    EXPECT_FALSE(find_scenario(name)->exercises.empty());
  }
  EXPECT_EQ(find_scenario("nope"), nullptr);
  RunConfig c;
  c.scenario = "sector_decay";
  EXPECT_THROW(scenario_family(c), ConfigError);
}

TEST(Scenarios, RectangleFamilyPair) {
  const auto fam = scenario_family(RunConfig{});
  const auto pair = fam(0.04);
  EXPECT_NEAR(pair.a.area(), 1.0, 1e-15);
  EXPECT_NEAR(pair.b.area(), 1.04, 1e-14);
}

TEST(Cli, ListVerb) {
  std::string out;
  EXPECT_EQ(cli({"list"}, &out), kOk);
  EXPECT_NE(out.find("covering_demo"), std::string::npos);
}

TEST(Cli, NoVerbIsConfigError) { EXPECT_EQ(cli({}), kConfigError); }

TEST(Cli, ValidateVerb) {
  const auto dir = scratch("validate");
  std::ofstream(dir / "good.json") << R"({"scenario": "covering_demo"})";
  std::ofstream(dir / "bad.json") << "{\n\"n\": 0\n}";
  std::string out, err;
  EXPECT_EQ(cli({"validate", (dir / "good.json").string()}, &out), kOk);
  EXPECT_NE(out.find("config ok"), std::string::npos);
  EXPECT_EQ(cli({"validate", (dir / "bad.json").string()}, &out, &err), kConfigError);
  EXPECT_NE(err.find("field 'n'"), std::string::npos);
  EXPECT_EQ(cli({"validate", (dir / "missing.json").string()}), kConfigError);
}

TEST(Cli, CoveringDemoRun) {
  const auto dir = scratch("covering");
  std::string out, err;
  EXPECT_EQ(cli({"run", "--scenario", "covering_demo", "--out", dir.string()}, &out, &err), kOk) << err;
  for (const char* f : {"records.csv", "report.json", "centers.dat", "MANIFEST"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const std::string manifest = slurp(dir / "MANIFEST");
  EXPECT_NE(manifest.find("status: ok"), std::string::npos);
  EXPECT_NE(slurp(dir / "report.json").find("\"boundary_coverage\""), std::string::npos);
}

TEST(Cli, RecordsAreByteReproducible) {
  RunConfig c;
  c.n = 2;
  c.h = 0.05;
  c.deltas = {0.02, 0.04, 0.08};
  std::ostringstream log;
  const auto a = scratch("repro_a"), b = scratch("repro_b");
  c.output_dir = a.string();
  ASSERT_EQ(run(c, log).exit_code, kOk) << log.str();
  c.output_dir = b.string();
  ASSERT_EQ(run(c, log).exit_code, kOk) << log.str();
  const std::string first = slurp(a / "records.csv");
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, slurp(b / "records.csv"));
}

TEST(Cli, NumericalFailureKeepsPartialManifest) {
  const auto dir = scratch("coarse");
  RunConfig c;
  c.h = 0.9;
  c.output_dir = dir.string();
  std::ostringstream log;
  const auto o = run(c, log);
  EXPECT_EQ(o.exit_code, kNumericalFailure);
  EXPECT_FALSE(o.message.empty());
  const std::string manifest = slurp(dir / "MANIFEST");
  EXPECT_NE(manifest.find("status: failed"), std::string::npos);
  EXPECT_NE(manifest.find("failure: "), std::string::npos);
}

TEST(Cli, AssertionFailureExitCode) {
  RunConfig c;
  c.n = 1;
  c.h = 0.05;
  c.tolerances["alpha_min"] = 5.0;
  c.output_dir = scratch("assert").string();
  std::ostringstream log;
  const auto o = run(c, log);
  EXPECT_EQ(o.exit_code, kAssertionFailure);
  bool found = false;
  for (const auto& ch : o.checks)
    if (ch.name == "alpha_range") found = !ch.passed;
  EXPECT_TRUE(found);
}

TEST(Cli, InvalidConfigNeverRuns) {
  RunConfig c;
  c.n = 0;
  c.output_dir = scratch("invalid").string();
  std::ostringstream log;
  EXPECT_EQ(run(c, log).exit_code, kConfigError);
  EXPECT_FALSE(fs::exists(fs::path(c.output_dir) / "MANIFEST"));
}
