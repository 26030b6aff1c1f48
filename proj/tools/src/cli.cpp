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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mrqsim/cli/app.hpp"
#include "mrqsim/errors.hpp"

namespace mrqsim::cli {

namespace {

int report_error(std::ostream& err, int code, std::string_view kind, const std::string& message) {
  const nlohmann::json record = {
      {"schema", kErrorSchema}, {"exit_code", code}, {"kind", kind}, {"message", message}};
  err << record.dump() << "\n";
  return code;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--scenario: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw ConfigError("--out: cannot write '" + path.string() + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"mrqsim: gradient-site field model, spin algebra, Bloch ensembles and pulse compiler"};
  std::string command, scenario_path, out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  app.add_option("command", command, "field | gate | purify | bell | t1had")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--scenario", scenario_path, "scenario JSON file")->required();
  app.add_option("--out", out_dir, "directory for result.json and CSV files");
  auto* seed_opt = app.add_option("--seed", seed, "overrides the scenario seed");
  app.add_option("--threads", threads, "worker threads for ensemble updates")
      ->check(CLI::Range(1u, 256u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report_error(err, kExitConfig, "usage_error", e.what());
  }

  try {
    RunOptions options;
    if (*seed_opt) options.seed = seed;
    options.threads = threads;
    const RunResult result = run_command(command, read_file(scenario_path), options);
    const std::string text = result.serialize();
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      write_file(std::filesystem::path(out_dir) / "result.json", text);
      for (const auto& [name, contents] : result.files) {
        write_file(std::filesystem::path(out_dir) / name, contents);
      }
    }
    out << text;
    return kExitOk;
  } catch (const ConfigError& e) {
    return report_error(err, kExitConfig, "config_error", e.what());
  } catch (const DomainError& e) {
    return report_error(err, kExitConfig, "domain_error", e.what());
  } catch (const CompilationError& e) {
    return report_error(err, kExitConfig, "compilation_error", e.what());
  } catch (const InvariantError& e) {
    return report_error(err, kExitInvariant, "invariant_violation", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(err, kExitConfig, "io_error", e.what());
  }
}

}  // namespace mrqsim::cli
