// Copyright 2026 The mrqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mrqsim/cli/app.hpp"
#include "mrqsim/errors.hpp"

namespace mrqsim::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Small enough for every command to finish in well under a second.
constexpr std::string_view kSmall = R"({
  "schema": "mrqsim.scenario/1",
  "seed": 11,
  "magnet": {
    "b0_T": 3.0,
    "samples_per_site": 11,
    "main_gradient": {"slope_T_per_m": 0.01},
    "sites": [{"z_center_m": 0.5, "half_width_m": 0.005,
               "reverse_gradient": {"slope_T_per_m": 0.01, "z_ref_m": 0.5}}]
  },
  "ensemble": {"size": 3000, "t1_s": 1.0, "t2_s": 0.1, "off_resonance_rad_per_s": 3141.59},
  "sequence": {
    "stimulated_echo": {"t_a1_s": 0.002, "t_a2_s": 0.001, "t_a3_s": 0.002, "t_a4_s": 0.001,
                        "window_half_width_rad": 0.5},
    "t1had": {"samples": 20}
  },
  "output": {"sample_interval_s": 0.001}
})";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mrqsim_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write(const fs::path& dir, const std::string& name, std::string_view text) {
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mrqsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config_error(std::string_view text) {
  try {
    load_scenario(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(Scenario, UnknownKeyReportsPath) {
  const std::string msg =
      config_error(R"({"ensemble": {"size": 10, "t3_s": 1}})");
  EXPECT_NE(msg.find("ensemble.t3_s"), std::string::npos) << msg;
  EXPECT_NE(msg.find("unknown key"), std::string::npos);
}

TEST(Scenario, NestedPathInArrays) {
  const std::string msg = config_error(
      R"({"magnet": {"b0_T": 3, "sites": [{"z_center_m": 0, "half_width_m": -1}]}})");
  EXPECT_NE(msg.find("magnet.sites[0].half_width_m"), std::string::npos) << msg;
}

TEST(Scenario, SyntaxErrorHasLineAndColumn) {
  const std::string msg = config_error("{\n  \"seed\": 1,\n  oops\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Scenario, TimingConstraintIsNamed) {
  const std::string msg = config_error(
      R"({"sequence": {"stimulated_echo": {"t_a1_s": 1, "t_a2_s": 1, "t_a3_s": 2, "t_a4_s": 1}}})");
  EXPECT_NE(msg.find("sequence.stimulated_echo"), std::string::npos) << msg;
  EXPECT_NE(msg.find("t_a1"), std::string::npos);
}

TEST(Scenario, WrongTypesAndSchema) {
  EXPECT_NE(config_error(R"({"ensemble": {"size": "big"}})").find("ensemble.size"), std::string::npos);
  EXPECT_NE(config_error(R"({"schema": "other/2"})").find("schema"), std::string::npos);
  EXPECT_NE(config_error(R"({"sequence": {"bell": {"program": "control=|0>"}}})")
                .find("sequence.bell.program"),
            std::string::npos);
  EXPECT_NO_THROW(load_scenario(R"({"ensemble": {"t2_s": "inf"}})"));
}

TEST(RunCommand, EveryCommandProducesSchemaAndDigest) {
  for (const auto& name : command_names()) {
    const RunResult r = run_command(name, kSmall, {});
    const json j = json::parse(r.serialize());
    EXPECT_EQ(j["schema"], kResultSchema) << name;
    EXPECT_EQ(j["command"], name);
    EXPECT_EQ(j["input_digest"].get<std::string>().size(), 64u);
    EXPECT_TRUE(j.contains("outputs"));
  }
}

TEST(RunCommand, DigestTracksSeed) {
  const RunResult a = run_command("gate", kSmall, {});
  const RunResult b = run_command("gate", kSmall, {});
  RunOptions o;
  o.seed = 99;
  const RunResult c = run_command("gate", kSmall, o);
  EXPECT_EQ(a.input_digest, b.input_digest);
  EXPECT_NE(a.input_digest, c.input_digest);
}

TEST(RunCommand, DeterministicAcrossThreads) {
  for (const char* name : {"purify", "t1had"}) {
    RunOptions o;
    o.threads = 1;
    const RunResult one = run_command(name, kSmall, o);
    for (unsigned t : {2u, 8u}) {
      o.threads = t;
      const RunResult many = run_command(name, kSmall, o);
      EXPECT_EQ(one.serialize(), many.serialize()) << name << " threads=" << t;
      EXPECT_EQ(one.files, many.files);
    }
  }
}

TEST(RunCommand, SeedChangesEnsemble) {
  RunOptions o;
  o.seed = 1;
  const std::string a = run_command("purify", kSmall, o).serialize();
  o.seed = 2;
  EXPECT_NE(a, run_command("purify", kSmall, o).serialize());
}

TEST(RunCommand, TrajectoryCsvHeader) {
  const RunResult r = run_command("t1had", kSmall, {});
  ASSERT_TRUE(r.files.contains("trajectory.csv"));
  EXPECT_EQ(r.files.at("trajectory.csv").rfind("t_s,Mx,My,Mz\n", 0), 0u);
}

TEST(RunCommand, T1hadNeedsFiniteT1) {
  EXPECT_THROW(run_command("t1had", R"({"ensemble": {"size": 4}})", {}), ConfigError);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(RunCli, WritesOutputs) {
  const fs::path dir = scratch("writes");
  const fs::path sc = write(dir, "s.json", kSmall);
  const CliRun r = cli({"bell", "--scenario", sc.string(), "--out", (dir / "out").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(slurp(dir / "out" / "result.json"), r.out);
  EXPECT_TRUE(fs::exists(dir / "out" / "pulse_program.json"));
  EXPECT_TRUE(r.err.empty());
}

TEST(RunCli, InvalidConfigExitsTwoWithoutOutputs) {
  const fs::path dir = scratch("invalid");
  const fs::path sc = write(dir, "s.json", R"({"ensemble": {"sizee": 5}})");
  const CliRun r = cli({"purify", "--scenario", sc.string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_TRUE(r.out.empty());
  const json e = json::parse(r.err);
  EXPECT_EQ(e["schema"], kErrorSchema);
  EXPECT_EQ(e["kind"], "config_error");
  EXPECT_EQ(e["exit_code"], 2);
  EXPECT_NE(e["message"].get<std::string>().find("ensemble.sizee"), std::string::npos);
}

TEST(RunCli, UsageErrors) {
  EXPECT_EQ(cli({"teleport", "--scenario", "x.json"}).code, kExitConfig);
  EXPECT_EQ(cli({"gate"}).code, kExitConfig);
  EXPECT_EQ(cli({"gate", "--scenario", "x.json", "--threads", "0"}).code, kExitConfig);
  const CliRun missing = cli({"gate", "--scenario", "/nonexistent/s.json"});
  EXPECT_EQ(missing.code, kExitConfig);
  EXPECT_NE(missing.err.find("cannot open"), std::string::npos);
}

TEST(RunCli, HelpExitsZero) {
  const CliRun r = cli({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("--scenario"), std::string::npos);
}

TEST(RunCli, BundledScenariosRun) {
  for (const char* name : {"field_28T.json", "t1had.json"}) {
    const fs::path sc = fs::path(MRQSIM_SOURCE_DIR) / "scenarios" / name;
    const CliRun r = cli({name[0] == 'f' ? "field" : "t1had", "--scenario", sc.string()});
    EXPECT_EQ(r.code, kExitOk) << name << ": " << r.err;
  }
}

TEST(Golden, BellResultMatches) {
  // The bell command has no stochastic inputs; its result is pinned.
  const fs::path sc = fs::path(MRQSIM_SOURCE_DIR) / "scenarios" / "default.json";
  const CliRun r = cli({"bell", "--scenario", sc.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json got = json::parse(r.out);
  const json want = json::parse(slurp(fs::path(MRQSIM_GOLDEN_DIR) / "bell_default.json"));
  EXPECT_EQ(got["outputs"]["assembly"], want["outputs"]["assembly"]);
  EXPECT_EQ(got["outputs"]["pulse_program"], want["outputs"]["pulse_program"]);
  const auto& fa = got["outputs"]["all_inputs"];
  const auto& fb = want["outputs"]["all_inputs"];
  ASSERT_EQ(fa.size(), fb.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    EXPECT_EQ(fa[i]["expected"], fb[i]["expected"]);
    for (const char* key : {"fidelity_R_zB", "fidelity_R_yB"}) {
      EXPECT_NEAR(fa[i][key].get<double>(), fb[i][key].get<double>(), 1e-12);
    }
  }
}

}  // namespace
}  // namespace mrqsim::cli
