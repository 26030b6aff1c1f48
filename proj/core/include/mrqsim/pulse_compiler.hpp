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

// Lowering of two-qubit H/CNOT circuits to RF pulse tokens, symbolic Bell
// assembly over branch terms, and numeric verification of compiled programs.
//
// Register layout: the control line is qubit 0, the target line qubit 1.
//
// Lowering table (version 1):
//   R(90)   -> R_axis(pi/2)
//   -R(90)  -> -1 * R_axis(pi/2)   (amplitude sign, not a negative angle)
//   R(180)  -> R_axis(pi)
//   R(-90)  -> R_axis(-pi/2)
// Target-line tokens act only when the control line is |1> (transition
// selective), so the quadrupole train lowers to a controlled rotation.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrqsim/spin_core.hpp"

namespace mrqsim::pulse {

using spin::Axis;

inline constexpr int kLoweringTableVersion = 1;
inline constexpr double kFidelityThreshold = 1.0 - 1e-12;

enum class Role { control, target };
enum class Basis { zero, one };
enum class Sign { plus, minus };
enum class Channel { control_line, target_line };
enum class TokenKind { r90, minus_r90, r180, r_minus90 };

std::string_view to_string(Role r);
std::string_view to_string(Basis b);
std::string_view to_string(Channel c);
/// "R(90)", "-R(90)", "R(180)", "R(-90)".
std::string_view to_string(TokenKind k);
/// Accepts "|0>", "0", "zero" and the "|1>" equivalents.
Basis parse_basis(std::string_view text);
TokenKind parse_token_kind(std::string_view text);
int bit(Basis b);

struct LogicalSignal {
  Role role = Role::control;
  Basis basis = Basis::zero;
  Sign sign = Sign::plus;
};

struct PulseToken {
  TokenKind kind = TokenKind::r90;
  Channel channel = Channel::control_line;
  std::optional<Axis> axis;
};

/// Axis annotations used when signals are turned into tokens.
struct LoweringConfig {
  /// Axis of the R(180) pair on a |0> control branch; y is the
  /// R_zB(180) -> R_yB(180) substitution.
  Axis zero_branch_axis = Axis::z;
  /// Axis of the single R(90) / -R(90) on a |1> control branch.
  Axis one_branch_axis = Axis::z;
  std::array<Axis, 4> quadrupole_axes = {Axis::x, Axis::z, Axis::y, Axis::x};
};

/// control/zero -> [R(180), R(180)]; control/one -> [R(90)] or [-R(90)];
/// target (either basis) -> [R(90), R(180), R(180), R(-90)].
std::vector<PulseToken> transform_signal(const LogicalSignal& signal,
                                         const LoweringConfig& config = {});

// --- symbolic branch algebra ------------------------------------------------

/// sign * (1/sqrt 2)^sqrt2_power, kept exact.
struct ExactAmplitude {
  int sign = 1;
  int sqrt2_power = 0;

  double value() const;
  friend bool operator==(const ExactAmplitude&, const ExactAmplitude&) = default;
};

/// Computational-basis value of a control or target token.
struct TokenValue {
  int sign = 1;
  int bit = 0;
};

/// Control tokens B+, B-, B++, B--; target tokens A+, A-.
/// The default table is B+ = |0>, B- = |0>, B++ = |1>, B-- = -|1>,
/// A+ = |0>, A- = |1>. It is a parameter so sign conventions can be probed.
struct TokenTable {
  std::map<std::string, TokenValue> control = {
      {"B+", {1, 0}}, {"B-", {1, 0}}, {"B++", {1, 1}}, {"B--", {-1, 1}}};
  std::map<std::string, TokenValue> target = {{"A+", {1, 0}}, {"A-", {1, 1}}};
};

struct ControlBranches {
  std::string first;   // B+ or B-
  std::string second;  // B++ or B--
};

/// zero -> (B+, B++); one -> (B-, B--).
ControlBranches control_hadamard_branches(Basis input);

/// zero -> A+; one -> A-.
std::string target_identity_branch(Basis input);

/// The signal a control token is sent as: its bit picks the basis, its
/// amplitude sign picks the R(90) sign.
LogicalSignal control_token_signal(const std::string& token, const TokenTable& table = {});

struct BranchTerm {
  std::string control_token;
  std::string target_token;
  int control_bit = 0;
  int control_sign = 1;
  int target_bit = 0;
  int cnot_result = 0;  // target bit after the CNOT

  /// "C[B+A+]"
  std::string label() const;
};

/// All 8 control x target combinations. Throws ConfigError unless the token
/// sets are exactly {B+, B-, B++, B--} and {A+, A-}.
std::vector<BranchTerm> enumerate_cnot_terms(const std::vector<std::string>& controls,
                                             const std::vector<std::string>& targets,
                                             const TokenTable& table = {});

struct BasisTerm {
  int index = 0;  // 2-qubit basis index, control bit is the high bit
  ExactAmplitude amplitude;
};

struct AssembledState {
  std::string label;         // Phi+, Phi-, Psi+, Psi-
  std::string half0_term;    // e.g. C[B+A+]
  std::string half1_term;    // e.g. C[B++A+]
  std::vector<BasisTerm> half0;
  std::vector<BasisTerm> half1;
  std::vector<BasisTerm> exact;  // merged, zero terms removed
  spin::StateVector state = spin::StateVector::basis(2, 0);  // numeric, normalized
  bool normalized_exactly = false;
};

struct BellAssembly {
  std::vector<BranchTerm> terms;
  std::array<AssembledState, 4> states;
  /// Unnormalized sum of the four states: (basis index, integer coefficient
  /// in units of 1/sqrt 2), zero coefficients omitted.
  std::vector<std::pair<int, int>> sum;
};

/// Pairs terms as Phi+ = B+ C[B+A+] + B++ C[B++A+], Phi- = B- C[B-A+] +
/// B-- C[B--A+], Psi+ = B+ C[B+A-] + B++ C[B++A-], Psi- = B- C[B-A-] +
/// B-- C[B--A-], each half weighted by 1/sqrt 2.
/// Throws AssemblyError naming the first missing term.
BellAssembly assemble_bell(const std::vector<BranchTerm>& terms, const TokenTable& table = {});

/// Label of the Bell state produced from control/target inputs.
std::string expected_bell_label(Basis phi1, Basis phi2);

// --- compilation ------------------------------------------------------------

struct CircuitProgram {
  Basis phi1 = Basis::zero;  // control input
  Basis phi2 = Basis::zero;  // target input
  bool hadamard = true;
  bool cnot = true;
  bool substitute_y = false;  // R_zB(180) -> R_yB(180)
};

struct CompiledPulse {
  Channel channel = Channel::control_line;
  TokenKind kind = TokenKind::r90;
  std::optional<Axis> axis;
  bool conditional = false;  // acts only when the control line is |1>
  int order = 0;
  std::string segment;  // hadamard, branch:B++, target, ...
};

struct PulseProgram {
  CircuitProgram circuit;
  std::vector<CompiledPulse> pulses;
  std::vector<std::string> notes;

  std::size_t count(std::string_view segment_prefix) const;
};

PulseProgram compile_bell_sequence(const CircuitProgram& circuit);

struct NetTargetReport {
  std::string net_class;  // "NOT", "identity" or "other"
  spin::Complex phase{1.0, 0.0};  // global phase of the product vs the class
};

/// Classifies a 2x2 unitary as phase * X, phase * I or neither.
NetTargetReport classify_target(const spin::Matrix& u);

struct VerificationReport {
  std::string expected_label;
  spin::StateVector input = spin::StateVector::basis(2, 0);
  spin::StateVector output = spin::StateVector::basis(2, 0);
  spin::StateVector expected = spin::StateVector::basis(2, 0);
  double fidelity = 0.0;
  bool passed = false;
  std::optional<NetTargetReport> target;
  spin::UnitaryGate unitary = spin::UnitaryGate::identity(2);
};

/// Lowers one pulse to a 4x4 unitary. Throws CompilationError for a pulse
/// without an axis annotation.
spin::UnitaryGate lower_pulse(const CompiledPulse& pulse);

/// Lowers every pulse, composes in order, applies to |phi1 phi2> and
/// compares against the expected state.
VerificationReport verify_compiled(const PulseProgram& program);

nlohmann::json to_json(const PulseProgram& program);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const BellAssembly& assembly);

}  // namespace mrqsim::pulse
