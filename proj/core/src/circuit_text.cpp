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

#include "mrqsim/circuit_text.hpp"

#include <set>
#include <string>
#include <vector>

#include "mrqsim/errors.hpp"

namespace mrqsim::pulse {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ConfigError("circuit line " + std::to_string(line) + ": " + what);
}

}  // namespace

CircuitProgram parse_circuit(std::string_view text) {
  CircuitProgram prog;
  prog.hadamard = false;
  prog.cnot = false;
  std::set<std::string> seen;
  std::size_t line_no = 0;

  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    for (std::string_view stmt : split(line, ';')) {
      stmt = trim(stmt);
      if (stmt.empty()) continue;
      const auto eq = stmt.find('=');
      if (eq == std::string_view::npos) fail(line_no, "expected key=value, got '" + std::string(stmt) + "'");
      const std::string key(trim(stmt.substr(0, eq)));
      const std::string_view value = trim(stmt.substr(eq + 1));
      if (!seen.insert(key).second) fail(line_no, "duplicate key '" + key + "'");

      try {
        if (key == "control") {
          prog.phi1 = parse_basis(value);
        } else if (key == "target") {
          prog.phi2 = parse_basis(value);
        } else if (key == "gates") {
          bool saw_cnot = false;
          for (std::string_view g : split(value, ',')) {
            g = trim(g);
            if (g.empty() && value.empty()) break;
            if (g == "H") {
              if (saw_cnot) fail(line_no, "H after CNOT is not supported");
              if (prog.hadamard) fail(line_no, "H listed twice");
              prog.hadamard = true;
            } else if (g == "CNOT") {
              if (saw_cnot) fail(line_no, "CNOT listed twice");
              prog.cnot = saw_cnot = true;
            } else if (g == "I") {
              // identity: no pulses
            } else {
              fail(line_no, "unknown gate '" + std::string(g) + "' (expected H, CNOT or I)");
            }
          }
        } else if (key == "substitution") {
          if (value == "R_zB") {
            prog.substitute_y = false;
          } else if (value == "R_yB") {
            prog.substitute_y = true;
          } else {
            fail(line_no, "substitution must be R_zB or R_yB");
          }
        } else {
          fail(line_no, "unknown key '" + key + "'");
        }
      } catch (const ConfigError& e) {
        const std::string msg = e.what();
        if (msg.rfind("circuit line", 0) == 0) throw;
        fail(line_no, msg);
      }
    }
  }
  if (!seen.contains("control")) fail(line_no, "missing required key 'control'");
  if (!seen.contains("target")) fail(line_no, "missing required key 'target'");
  return prog;
}

std::string format_circuit(const CircuitProgram& p) {
  std::string gates;
  if (p.hadamard) gates = "H";
  if (p.cnot) gates += gates.empty() ? "CNOT" : ",CNOT";
  if (gates.empty()) gates = "I";
  return "control=" + std::string(to_string(p.phi1)) + "; target=" + std::string(to_string(p.phi2)) +
         "; gates=" + gates + "; substitution=" + (p.substitute_y ? "R_yB" : "R_zB");
}

}  // namespace mrqsim::pulse
