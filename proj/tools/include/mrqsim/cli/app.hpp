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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrqsim/bloch_sim.hpp"
#include "mrqsim/cli/scenario.hpp"

namespace mrqsim::cli {

inline constexpr std::string_view kResultSchema = "mrqsim.result/1";
inline constexpr std::string_view kErrorSchema = "mrqsim.error/1";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides ensemble.seed
  unsigned threads = 1;
};

struct RunResult {
  std::string command;
  std::string input_digest;  // sha256 of scenario bytes and effective seed
  nlohmann::json outputs;
  /// Extra files written next to result.json (name -> contents).
  std::map<std::string, std::string> files;

  nlohmann::json to_json() const;
  /// Pretty-printed JSON with a trailing newline; byte-stable.
  std::string serialize() const;
};

const std::vector<std::string>& command_names();

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// "t_s,Mx,My,Mz" rows with round-trip precision.
std::string trajectory_csv(const std::vector<bloch::TrajectorySample>& samples);

/// Parses and validates the whole scenario, then runs one command.
/// Throws ConfigError (bad input) or InvariantError (result out of bounds).
RunResult run_command(std::string_view command, std::string_view scenario_text,
                      const RunOptions& options);

/// Full CLI: argument parsing, file IO, exit codes, error records.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mrqsim::cli
