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

#include "mrqsim/pulse_compiler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "mrqsim/errors.hpp"
#include "mrqsim/spin_json.hpp"

namespace mrqsim::pulse {

namespace {

constexpr int kControlQubit = 0;
constexpr int kTargetQubit = 1;
constexpr int kRegister = 2;

std::vector<BasisTerm> token_product(const TokenValue& control, int target_bit) {
  return {{(control.bit << 1) | target_bit, {control.sign, 1}}};
}

// Adds exact terms that share a basis index. Every half carries the same
// 1/sqrt 2 weight, so coefficients combine as integers.
std::vector<BasisTerm> merge(const std::vector<BasisTerm>& a, const std::vector<BasisTerm>& b) {
  std::map<int, int> coeff;
  int power = -1;
  for (const auto* part : {&a, &b}) {
    for (const auto& t : *part) {
      if (power >= 0 && t.amplitude.sqrt2_power != power) {
        throw AssemblyError("assemble_bell: halves carry different normalizations");
      }
      power = t.amplitude.sqrt2_power;
      coeff[t.index] += t.amplitude.sign;
    }
  }
  std::vector<BasisTerm> out;
  for (auto [index, c] : coeff) {
    if (c == 0) continue;
    // Coefficients of +-2 are 2 (1/sqrt 2) = sqrt 2; keep exact only for +-1.
    if (std::abs(c) != 1) {
      throw AssemblyError("assemble_bell: branch halves interfere constructively on |" +
                          std::to_string(index >> 1) + std::to_string(index & 1) +
                          ">; token table is not a valid Hadamard split");
    }
    out.push_back({index, {c, power}});
  }
  return out;
}

spin::Vector to_vector(const std::vector<BasisTerm>& terms) {
  spin::Vector v = spin::Vector::Zero(4);
  for (const auto& t : terms) v[t.index] += t.amplitude.value();
  return v;
}

const std::array<std::string, 4> kBellLabels = {"Phi+", "Phi-", "Psi+", "Psi-"};

spin::UnitaryGate token_rotation(TokenKind kind, Axis axis) {
  constexpr double pi = std::numbers::pi;
  switch (kind) {
    case TokenKind::r90:
      return spin::rotation_gate(axis, pi / 2.0);
    case TokenKind::minus_r90:
      return spin::rotation_gate(axis, pi / 2.0).with_phase(-1.0, "-R(90)");
    case TokenKind::r180:
      return spin::rotation_gate(axis, pi);
    case TokenKind::r_minus90:
      return spin::rotation_gate(axis, -pi / 2.0);
  }
  throw CompilationError("unknown token kind");
}

}  // namespace

std::string_view to_string(Role r) { return r == Role::control ? "control" : "target"; }
std::string_view to_string(Basis b) { return b == Basis::zero ? "|0>" : "|1>"; }
std::string_view to_string(Channel c) {
  return c == Channel::control_line ? "control_line" : "target_line";
}
std::string_view to_string(TokenKind k) {
  switch (k) {
    case TokenKind::r90:
      return "R(90)";
    case TokenKind::minus_r90:
      return "-R(90)";
    case TokenKind::r180:
      return "R(180)";
    case TokenKind::r_minus90:
      return "R(-90)";
  }
  return "?";
}

Basis parse_basis(std::string_view text) {
  if (text == "|0>" || text == "0" || text == "zero") return Basis::zero;
  if (text == "|1>" || text == "1" || text == "one") return Basis::one;
  throw ConfigError("unknown basis state '" + std::string(text) + "' (expected |0> or |1>)");
}

TokenKind parse_token_kind(std::string_view text) {
  for (TokenKind k : {TokenKind::r90, TokenKind::minus_r90, TokenKind::r180, TokenKind::r_minus90}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("unknown pulse token '" + std::string(text) + "'");
}

int bit(Basis b) { return b == Basis::zero ? 0 : 1; }

std::vector<PulseToken> transform_signal(const LogicalSignal& s, const LoweringConfig& config) {
  if (s.role == Role::target) {
    const TokenKind kinds[] = {TokenKind::r90, TokenKind::r180, TokenKind::r180,
                               TokenKind::r_minus90};
    std::vector<PulseToken> out;
    for (std::size_t i = 0; i < 4; ++i) {
      out.push_back({kinds[i], Channel::target_line, config.quadrupole_axes[i]});
    }
    return out;
  }
  if (s.basis == Basis::zero) {
    return {{TokenKind::r180, Channel::control_line, config.zero_branch_axis},
            {TokenKind::r180, Channel::control_line, config.zero_branch_axis}};
  }
  return {{s.sign == Sign::plus ? TokenKind::r90 : TokenKind::minus_r90, Channel::control_line,
           config.one_branch_axis}};
}

double ExactAmplitude::value() const {
  return static_cast<double>(sign) * std::pow(std::numbers::sqrt2 / 2.0, sqrt2_power);
}

ControlBranches control_hadamard_branches(Basis input) {
  return input == Basis::zero ? ControlBranches{"B+", "B++"} : ControlBranches{"B-", "B--"};
}

std::string target_identity_branch(Basis input) { return input == Basis::zero ? "A+" : "A-"; }

LogicalSignal control_token_signal(const std::string& token, const TokenTable& table) {
  const auto it = table.control.find(token);
  if (it == table.control.end()) throw ConfigError("unknown control token '" + token + "'");
  return {Role::control, it->second.bit == 0 ? Basis::zero : Basis::one,
          it->second.sign > 0 ? Sign::plus : Sign::minus};
}

std::string BranchTerm::label() const { return "C[" + control_token + target_token + "]"; }

std::vector<BranchTerm> enumerate_cnot_terms(const std::vector<std::string>& controls,
                                             const std::vector<std::string>& targets,
                                             const TokenTable& table) {
  const std::set<std::string> want_c = {"B+", "B-", "B++", "B--"};
  const std::set<std::string> want_t = {"A+", "A-"};
  if (controls.size() != 4 || std::set(controls.begin(), controls.end()) != want_c) {
    throw ConfigError("enumerate_cnot_terms: controls must be exactly B+, B-, B++, B--");
  }
  if (targets.size() != 2 || std::set(targets.begin(), targets.end()) != want_t) {
    throw ConfigError("enumerate_cnot_terms: targets must be exactly A+, A-");
  }
  std::vector<BranchTerm> out;
  for (const auto& t : targets) {
    for (const auto& c : controls) {
      const TokenValue cv = table.control.at(c);
      const TokenValue tv = table.target.at(t);
      BranchTerm term;
      term.control_token = c;
      term.target_token = t;
      term.control_bit = cv.bit;
      term.control_sign = cv.sign;
      term.target_bit = tv.bit;
      term.cnot_result = tv.bit ^ cv.bit;
      out.push_back(std::move(term));
    }
  }
  return out;
}

BellAssembly assemble_bell(const std::vector<BranchTerm>& terms, const TokenTable& table) {
  std::map<std::string, const BranchTerm*> by_label;
  for (const auto& t : terms) by_label[t.label()] = &t;
  auto need = [&](const std::string& label) -> const BranchTerm& {
    const auto it = by_label.find(label);
    if (it == by_label.end()) throw AssemblyError("assemble_bell: missing term " + label);
    return *it->second;
  };

  struct Pairing {
    const char* first;
    const char* second;
    const char* target;
  };
  const std::array<Pairing, 4> pairings = {{{"B+", "B++", "A+"},
                                            {"B-", "B--", "A+"},
                                            {"B+", "B++", "A-"},
                                            {"B-", "B--", "A-"}}};

  BellAssembly out;
  out.terms = terms;
  std::map<int, int> sum;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& p = pairings[k];
    const BranchTerm& h0 = need(std::string("C[") + p.first + p.target + "]");
    const BranchTerm& h1 = need(std::string("C[") + p.second + p.target + "]");
    AssembledState& st = out.states[k];
    st.label = kBellLabels[k];
    st.half0_term = h0.label();
    st.half1_term = h1.label();
    // The control factor B multiplies the CNOT output C[BA] = |b>|a xor b>.
    st.half0 = token_product(table.control.at(h0.control_token), h0.cnot_result);
    st.half1 = token_product(table.control.at(h1.control_token), h1.cnot_result);
    st.exact = merge(st.half0, st.half1);
    // Two unit coefficients at 1/sqrt 2 each give norm 1 without rounding.
    st.normalized_exactly =
        st.exact.size() == 2 && std::all_of(st.exact.begin(), st.exact.end(), [](const auto& t) {
          return t.amplitude.sqrt2_power == 1;
        });
    st.state = spin::StateVector::normalized(to_vector(st.exact));
    for (const auto& t : st.exact) sum[t.index] += t.amplitude.sign;
  }
  for (auto [index, c] : sum) {
    if (c != 0) out.sum.emplace_back(index, c);
  }
  return out;
}

std::string expected_bell_label(Basis phi1, Basis phi2) {
  return kBellLabels[static_cast<std::size_t>(bit(phi1) + 2 * bit(phi2))];
}

std::size_t PulseProgram::count(std::string_view prefix) const {
  return static_cast<std::size_t>(std::count_if(pulses.begin(), pulses.end(), [&](const auto& p) {
    return std::string_view(p.segment).substr(0, prefix.size()) == prefix;
  }));
}

PulseProgram compile_bell_sequence(const CircuitProgram& circuit) {
  PulseProgram prog;
  prog.circuit = circuit;
  LoweringConfig config;
  if (circuit.substitute_y) config.zero_branch_axis = Axis::y;

  int order = 0;
  auto emit = [&](const PulseToken& tok, bool conditional, const std::string& segment) {
    prog.pulses.push_back({tok.channel, tok.kind, tok.axis, conditional, order++, segment});
  };

  if (circuit.hadamard) {
    emit({TokenKind::r90, Channel::control_line, Axis::y}, false, "hadamard");
    emit({TokenKind::r180, Channel::control_line, Axis::x}, false, "hadamard");
  }
  if (circuit.hadamard && circuit.cnot) {
    const ControlBranches br = control_hadamard_branches(circuit.phi1);
    for (const auto& token : {br.first, br.second}) {
      for (const auto& tok : transform_signal(control_token_signal(token), config)) {
        emit(tok, false, "branch:" + token);
      }
    }
  }
  if (circuit.cnot) {
    const LogicalSignal target{Role::target, circuit.phi2, Sign::plus};
    for (const auto& tok : transform_signal(target, config)) emit(tok, true, "target");
    prog.notes.emplace_back(
        "target quadrupole train is identical for |0> and |1>; the target basis is carried as "
        "input-state metadata");
  }
  if (circuit.substitute_y) {
    prog.notes.emplace_back("control branch R_zB(180) replaced by R_yB(180)");
  }
  return prog;
}

NetTargetReport classify_target(const spin::Matrix& u) {
  NetTargetReport r;
  const spin::Complex diag = u(0, 0);
  const spin::Complex off = u(1, 0);
  constexpr double tol = spin::kPropertyTolerance;
  if (std::abs(u(0, 1)) < tol && std::abs(u(1, 0)) < tol && std::abs(u(0, 0) - u(1, 1)) < tol) {
    r.net_class = "identity";
    r.phase = diag;
  } else if (std::abs(u(0, 0)) < tol && std::abs(u(1, 1)) < tol &&
             std::abs(u(0, 1) - u(1, 0)) < tol) {
    r.net_class = "NOT";
    r.phase = off;
  } else {
    r.net_class = "other";
    r.phase = std::polar(1.0, std::arg(u.determinant()) / 2.0);
  }
  return r;
}

spin::UnitaryGate lower_pulse(const CompiledPulse& pulse) {
  if (!pulse.axis) {
    throw CompilationError("pulse " + std::to_string(pulse.order) + " (" +
                           std::string(to_string(pulse.kind)) + ", " + pulse.segment +
                           ") has no axis annotation and cannot be lowered");
  }
  const spin::UnitaryGate single = token_rotation(pulse.kind, *pulse.axis);
  if (pulse.channel == Channel::control_line) {
    if (pulse.conditional) {
      throw CompilationError("pulse " + std::to_string(pulse.order) +
                             ": conditional pulses are only defined on the target line");
    }
    return spin::embed(single, kControlQubit, kRegister);
  }
  if (pulse.conditional) return spin::controlled(single, kControlQubit, kTargetQubit, kRegister);
  return spin::embed(single, kTargetQubit, kRegister);
}

VerificationReport verify_compiled(const PulseProgram& program) {
  const CircuitProgram& c = program.circuit;
  VerificationReport r;
  spin::UnitaryGate u = spin::UnitaryGate::identity(kRegister);
  spin::Matrix target = spin::Matrix::Identity(2, 2);
  bool has_target = false;
  for (const auto& p : program.pulses) {
    u = lower_pulse(p) * u;
    if (p.channel == Channel::target_line) {
      target = token_rotation(p.kind, *p.axis).matrix() * target;
      has_target = true;
    }
  }
  r.unitary = u.relabeled("program");
  if (has_target) r.target = classify_target(target);

  r.input = spin::StateVector::basis(kRegister, static_cast<std::size_t>(2 * bit(c.phi1) + bit(c.phi2)));
  r.output = r.unitary.apply(r.input);

  if (c.hadamard && c.cnot) {
    r.expected_label = expected_bell_label(c.phi1, c.phi2);
    const std::vector<std::string> controls = {"B+", "B-", "B++", "B--"};
    const std::vector<std::string> targets = {"A+", "A-"};
    const BellAssembly a = assemble_bell(enumerate_cnot_terms(controls, targets));
    for (const auto& st : a.states) {
      if (st.label == r.expected_label) r.expected = st.state;
    }
  } else {
    spin::UnitaryGate ref = spin::UnitaryGate::identity(kRegister);
    std::string label = "input";
    if (c.hadamard) {
      ref = spin::embed(spin::canonical_hadamard(), kControlQubit, kRegister) * ref;
      label = "H";
    }
    if (c.cnot) {
      ref = spin::cnot_gate(kControlQubit, kTargetQubit, kRegister) * ref;
      label = "CNOT";
    }
    r.expected_label = label + "|" + std::to_string(bit(c.phi1)) + std::to_string(bit(c.phi2)) + ">";
    r.expected = ref.apply(r.input);
  }
  r.fidelity = spin::state_fidelity(r.output, r.expected);
  r.passed = r.fidelity >= kFidelityThreshold;
  return r;
}

namespace {

nlohmann::json terms_to_json(const std::vector<BasisTerm>& terms) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : terms) {
    out.push_back({{"basis", std::string("|") + std::to_string(t.index >> 1) +
                                 std::to_string(t.index & 1) + ">"},
                   {"sign", t.amplitude.sign},
                   {"inv_sqrt2_power", t.amplitude.sqrt2_power}});
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const PulseProgram& p) {
  nlohmann::json pulses = nlohmann::json::array();
  for (const auto& q : p.pulses) {
    pulses.push_back({{"channel", to_string(q.channel)},
                      {"token", to_string(q.kind)},
                      {"axis", q.axis ? nlohmann::json(spin::to_string(*q.axis)) : nlohmann::json()},
                      {"conditional", q.conditional},
                      {"order", q.order},
                      {"segment", q.segment}});
  }
  nlohmann::json gates = nlohmann::json::array();
  if (p.circuit.hadamard) gates.push_back("H");
  if (p.circuit.cnot) gates.push_back("CNOT");
  return {{"schema", "mrqsim.pulse_program/1"},
          {"lowering_table_version", kLoweringTableVersion},
          {"control", to_string(p.circuit.phi1)},
          {"target", to_string(p.circuit.phi2)},
          {"gates", gates},
          {"control_branch_axis", p.circuit.substitute_y ? "y" : "z"},
          {"token_counts",
           {{"hadamard", p.count("hadamard")},
            {"branch", p.count("branch:")},
            {"target", p.count("target")}}},
          {"pulses", pulses},
          {"notes", p.notes}};
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j = {{"expected", r.expected_label},
                      {"input", r.input},
                      {"output", r.output},
                      {"expected_state", r.expected},
                      {"fidelity", r.fidelity},
                      {"threshold", kFidelityThreshold},
                      {"passed", r.passed}};
  if (r.target) {
    j["target_net"] = {{"class", r.target->net_class},
                       {"phase", spin::complex_to_json(r.target->phase)}};
  }
  return j;
}

nlohmann::json to_json(const BellAssembly& a) {
  nlohmann::json states = nlohmann::json::array();
  for (const auto& s : a.states) {
    states.push_back({{"label", s.label},
                      {"half0", {{"term", s.half0_term}, {"amplitudes", terms_to_json(s.half0)}}},
                      {"half1", {{"term", s.half1_term}, {"amplitudes", terms_to_json(s.half1)}}},
                      {"exact", terms_to_json(s.exact)},
                      {"state", s.state},
                      {"normalized_exactly", s.normalized_exactly}});
  }
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : a.terms) {
    terms.push_back({{"term", t.label()},
                     {"control_bit", t.control_bit},
                     {"control_sign", t.control_sign},
                     {"target_bit", t.target_bit},
                     {"cnot_result", t.cnot_result}});
  }
  nlohmann::json sum = nlohmann::json::array();
  for (auto [index, c] : a.sum) {
    sum.push_back({{"basis", std::string("|") + std::to_string(index >> 1) +
                                 std::to_string(index & 1) + ">"},
                   {"coefficient", c},
                   {"inv_sqrt2_power", 1}});
  }
  return {{"terms", terms}, {"states", states}, {"sum", sum}};
}

}  // namespace mrqsim::pulse
