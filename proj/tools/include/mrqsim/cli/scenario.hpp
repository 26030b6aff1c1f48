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

// Scenario files: one JSON document with optional sections
//
//   magnet    field geometry              (field)
//   ensemble  isochromat ensemble         (purify, t1had)
//   sequence  per-command parameters      (gate, purify, bell, t1had)
//   output    sampling and file options
//
// Every physical quantity carries its unit in the key name (b0_T, t1_s,
// off_resonance_rad_per_s, ...). Unknown keys are rejected with their full
// key path. Relaxation times accept the string "inf".

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrqsim/bloch_sim.hpp"
#include "mrqsim/field_model.hpp"
#include "mrqsim/pulse_compiler.hpp"
#include "mrqsim/purification.hpp"

namespace mrqsim::cli {

inline constexpr std::string_view kScenarioSchema = "mrqsim.scenario/1";

struct MagnetSection {
  field::MagnetSystem system;
  std::size_t samples_per_site = 101;
};

struct PopulationSection {
  double n_total = 6.7e22;
  double temperature_kelvin = 300.0;
  std::optional<double> b0;  // defaults to magnet.b0_T
};

struct EnsembleSection {
  bloch::EnsembleConfig config;
  std::optional<PopulationSection> population;
};

struct GateSection {
  double epsilon = 0.5;
  std::string pure_state_bits = "0";
};

struct EchoSection {
  bloch::StimulatedEchoTiming timing;
  bloch::StimulatedEchoOptions options;
  std::vector<double> compensation_shifts = {-50.0, -25.0, 25.0, 50.0, 100.0};
  int purify_steps = 3;
  double purify_factor = 1e-6;
  double epsilon0 = 0.0;
};

struct BellSection {
  std::string program_text = "control=|0>; target=|0>; gates=H,CNOT";
  pulse::CircuitProgram program;
};

struct T1HadSection {
  std::size_t samples = 1000;
};

struct OutputSection {
  double sample_interval = 0.0;  // s
  double timing_jitter = 0.0;    // s
  std::optional<std::uint64_t> jitter_seed;
  bool trajectory_csv = true;
};

struct Scenario {
  std::optional<std::uint64_t> seed;
  std::optional<MagnetSection> magnet;
  std::optional<EnsembleSection> ensemble;
  GateSection gate;
  std::optional<EchoSection> echo;
  BellSection bell;
  T1HadSection t1had;
  OutputSection output;
};

/// Validates and converts a parsed document. Throws ConfigError whose
/// message starts with the offending key path, e.g. "magnet.sites[1].z_center_m".
Scenario parse_scenario(const nlohmann::json& doc);

/// Parses JSON text first; syntax errors are reported with line and column.
Scenario load_scenario(std::string_view text);

}  // namespace mrqsim::cli
