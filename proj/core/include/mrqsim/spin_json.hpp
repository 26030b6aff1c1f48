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

// JSON layout for states, gates and density matrices.
//
// Complex numbers are two-element arrays [re, im]. Matrices are arrays of
// rows (row-major), each row an array of complex numbers:
//
//   state:   {"n_qubits": 1, "dimension": 2,
//             "amplitudes": [[0.7071067811865475, 0.0], [0.7071067811865475, 0.0]]}
//   gate:    {"label": "H", "n_qubits": 1, "dimension": 2,
//             "entries": [[[r, 0.0], [r, 0.0]], [[r, 0.0], [-r, 0.0]]]}
//   density: {"n_qubits": 1, "dimension": 2, "entries": [...same as gate...]}
//
// Readers re-run the constructor checks, so a parsed object always satisfies
// its invariants.

#pragma once

#include <nlohmann/json.hpp>

#include "mrqsim/spin_core.hpp"

namespace mrqsim::spin {

nlohmann::json complex_to_json(Complex z);
nlohmann::json matrix_to_json(const Matrix& m);

void to_json(nlohmann::json& j, const StateVector& s);
void to_json(nlohmann::json& j, const UnitaryGate& g);
void to_json(nlohmann::json& j, const DensityMatrix& d);

/// Throw ConfigError on malformed layout, InvariantError on invalid values.
StateVector state_from_json(const nlohmann::json& j);
UnitaryGate gate_from_json(const nlohmann::json& j);
DensityMatrix density_from_json(const nlohmann::json& j);

}  // namespace mrqsim::spin
