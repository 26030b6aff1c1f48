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

// Line-oriented circuit text:
//
//   control=|0>
//   target=|1>; gates=H,CNOT
//   substitution=R_yB     # optional, default R_zB
//
// Statements are separated by newlines or ';'. '#' starts a comment.
// Keys: control, target, gates, substitution. Each key at most once;
// control and target are required. Gates: H, CNOT, I, in circuit order;
// CNOT before H is not supported by the Bell compiler.

#pragma once

#include <string_view>

#include "mrqsim/pulse_compiler.hpp"

namespace mrqsim::pulse {

/// Throws ConfigError with "line N:" diagnostics.
CircuitProgram parse_circuit(std::string_view text);

/// Inverse of parse_circuit, on a single line.
std::string format_circuit(const CircuitProgram& program);

}  // namespace mrqsim::pulse
