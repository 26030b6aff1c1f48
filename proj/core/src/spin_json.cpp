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

#include "mrqsim/spin_json.hpp"

#include "mrqsim/errors.hpp"

namespace mrqsim::spin {

namespace {

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrix_from_json(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) {
    throw ConfigError("expected 'entries' as a non-empty array of rows");
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ConfigError("matrix rows must all have length equal to the row count");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
  }
  return m;
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

nlohmann::json complex_to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

void to_json(nlohmann::json& j, const StateVector& s) {
  nlohmann::json amps = nlohmann::json::array();
  for (Eigen::Index i = 0; i < s.dimension(); ++i) amps.push_back(complex_to_json(s[i]));
  j = nlohmann::json{{"n_qubits", s.n_qubits()}, {"dimension", s.dimension()}, {"amplitudes", amps}};
}

void to_json(nlohmann::json& j, const UnitaryGate& g) {
  j = nlohmann::json{{"label", g.label()},
                     {"n_qubits", g.n_qubits()},
                     {"dimension", g.dimension()},
                     {"entries", matrix_to_json(g.matrix())}};
}

void to_json(nlohmann::json& j, const DensityMatrix& d) {
  j = nlohmann::json{
      {"n_qubits", d.n_qubits()}, {"dimension", d.dimension()}, {"entries", matrix_to_json(d.matrix())}};
}

StateVector state_from_json(const nlohmann::json& j) {
  const auto& amps = require(j, "amplitudes");
  if (!amps.is_array() || amps.empty()) {
    throw ConfigError("'amplitudes' must be a non-empty array");
  }
  Vector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = complex_from_json(amps[i]);
  }
  StateVector s(std::move(v));
  if (j.contains("dimension") && j.at("dimension").get<Eigen::Index>() != s.dimension()) {
    throw ConfigError("'dimension' disagrees with the amplitude count");
  }
  return s;
}

UnitaryGate gate_from_json(const nlohmann::json& j) {
  std::string label = j.contains("label") ? j.at("label").get<std::string>() : "U";
  UnitaryGate g(matrix_from_json(require(j, "entries")), std::move(label));
  if (j.contains("dimension") && j.at("dimension").get<Eigen::Index>() != g.dimension()) {
    throw ConfigError("'dimension' disagrees with the entry count");
  }
  return g;
}

DensityMatrix density_from_json(const nlohmann::json& j) {
  DensityMatrix d(matrix_from_json(require(j, "entries")));
  if (j.contains("dimension") && j.at("dimension").get<Eigen::Index>() != d.dimension()) {
    throw ConfigError("'dimension' disagrees with the entry count");
  }
  return d;
}

}  // namespace mrqsim::spin
