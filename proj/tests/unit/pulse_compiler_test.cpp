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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrqsim/errors.hpp"
#include "mrqsim/pulse_compiler.hpp"
#include "oracles.hpp"

namespace mrqsim::pulse {
namespace {

using spin::Complex;
using spin::Matrix;

const std::vector<std::string> kControls = {"B+", "B-", "B++", "B--"};
const std::vector<std::string> kTargets = {"A+", "A-"};

std::vector<std::string> kinds(const std::vector<PulseToken>& toks) {
  std::vector<std::string> out;
  for (const auto& t : toks) out.emplace_back(to_string(t.kind));
  return out;
}

int coeff(const std::vector<BasisTerm>& terms, int index) {
  for (const auto& t : terms) {
    if (t.index == index) return t.amplitude.sign;
  }
  return 0;
}

TEST(TransformSignal, ControlZero) {
  const auto toks = transform_signal({Role::control, Basis::zero, Sign::plus});
  EXPECT_EQ(kinds(toks), (std::vector<std::string>{"R(180)", "R(180)"}));
  for (const auto& t : toks) EXPECT_EQ(t.channel, Channel::control_line);
}

TEST(TransformSignal, ControlOneSigns) {
  EXPECT_EQ(kinds(transform_signal({Role::control, Basis::one, Sign::plus})),
            (std::vector<std::string>{"R(90)"}));
  EXPECT_EQ(kinds(transform_signal({Role::control, Basis::one, Sign::minus})),
            (std::vector<std::string>{"-R(90)"}));
}

TEST(TransformSignal, TargetQuadrupole) {
  for (Basis b : {Basis::zero, Basis::one}) {
    const auto toks = transform_signal({Role::target, b, Sign::plus});
    EXPECT_EQ(kinds(toks), (std::vector<std::string>{"R(90)", "R(180)", "R(180)", "R(-90)"}));
    for (const auto& t : toks) EXPECT_EQ(t.channel, Channel::target_line);
  }
}

TEST(TransformSignal, TotalAndDeterministic) {
  for (Role r : {Role::control, Role::target}) {
    for (Basis b : {Basis::zero, Basis::one}) {
      for (Sign s : {Sign::plus, Sign::minus}) {
        const auto a = transform_signal({r, b, s});
        const auto c = transform_signal({r, b, s});
        EXPECT_FALSE(a.empty());
        EXPECT_EQ(kinds(a), kinds(c));
        for (const auto& t : a) EXPECT_TRUE(t.axis.has_value());
      }
    }
  }
}

TEST(TokenKind, ParseRoundTrip) {
  for (TokenKind k : {TokenKind::r90, TokenKind::minus_r90, TokenKind::r180, TokenKind::r_minus90}) {
    EXPECT_EQ(parse_token_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_token_kind("R(45)"), ConfigError);
}

TEST(Branches, ControlHadamard) {
  EXPECT_EQ(control_hadamard_branches(Basis::zero).first, "B+");
  EXPECT_EQ(control_hadamard_branches(Basis::zero).second, "B++");
  EXPECT_EQ(control_hadamard_branches(Basis::one).first, "B-");
  EXPECT_EQ(control_hadamard_branches(Basis::one).second, "B--");
}

TEST(Branches, AmplitudesMatchHadamardOutput) {
  // Each branch carries 1/sqrt 2; the pair reproduces H|b> entrywise.
  const TokenTable table;
  const spin::UnitaryGate h = spin::canonical_hadamard();
  for (Basis b : {Basis::zero, Basis::one}) {
    const ControlBranches br = control_hadamard_branches(b);
    spin::Vector v = spin::Vector::Zero(2);
    for (const auto& tok : {br.first, br.second}) {
      const TokenValue tv = table.control.at(tok);
      v[tv.bit] += tv.sign * ExactAmplitude{1, 1}.value();
    }
    const spin::StateVector ref = h.apply(spin::StateVector::basis(1, static_cast<std::size_t>(bit(b))));
    EXPECT_LE((v - ref.amplitudes()).norm(), 1e-15);
  }
}

TEST(Branches, TargetIdentity) {
  EXPECT_EQ(target_identity_branch(Basis::zero), "A+");
  EXPECT_EQ(target_identity_branch(Basis::one), "A-");
}

TEST(Branches, ControlTokenSignal) {
  const LogicalSignal s = control_token_signal("B--");
  EXPECT_EQ(s.basis, Basis::one);
  EXPECT_EQ(s.sign, Sign::minus);
  EXPECT_EQ(control_token_signal("B+").basis, Basis::zero);
  EXPECT_THROW(control_token_signal("B"), ConfigError);
}

TEST(CnotTerms, EightTermsWithFlips) {
  const auto terms = enumerate_cnot_terms(kControls, kTargets);
  ASSERT_EQ(terms.size(), 8u);
  for (const auto& t : terms) {
    const bool one = t.control_token == "B++" || t.control_token == "B--";
    EXPECT_EQ(t.cnot_result, t.target_bit ^ (one ? 1 : 0)) << t.label();
  }
  auto find = [&](const std::string& label) {
    for (const auto& t : terms) {
      if (t.label() == label) return t;
    }
    ADD_FAILURE() << label;
    return BranchTerm{};
  };
  EXPECT_EQ(find("C[B+A+]").cnot_result, 0);
  EXPECT_EQ(find("C[B++A+]").cnot_result, 1);
}

TEST(CnotTerms, RejectsWrongTokenSets) {
  EXPECT_THROW(enumerate_cnot_terms({"B+", "B-", "B++"}, kTargets), ConfigError);
  EXPECT_THROW(enumerate_cnot_terms(kControls, {"A+"}), ConfigError);
}

TEST(Assemble, PhiPlusAndPsiMinus) {
  const BellAssembly a = assemble_bell(enumerate_cnot_terms(kControls, kTargets));
  EXPECT_EQ(a.states[0].label, "Phi+");
  EXPECT_EQ(coeff(a.states[0].exact, 0), 1);
  EXPECT_EQ(coeff(a.states[0].exact, 3), 1);
  EXPECT_EQ(a.states[3].label, "Psi-");
  EXPECT_EQ(coeff(a.states[3].exact, 1), 1);
  EXPECT_EQ(coeff(a.states[3].exact, 2), -1);
  EXPECT_EQ(a.states[0].half0_term, "C[B+A+]");
  EXPECT_EQ(a.states[0].half1_term, "C[B++A+]");
  for (const auto& s : a.states) EXPECT_TRUE(s.normalized_exactly) << s.label;
}

TEST(Assemble, MatchesCanonicalBellStates) {
  const BellAssembly a = assemble_bell(enumerate_cnot_terms(kControls, kTargets));
  const auto bell = spin::bell_states();
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_GE(spin::state_fidelity(a.states[i].state, bell[i].state), 1 - 1e-12);
    for (std::size_t k = 0; k < 4; ++k) {
      const Complex ip = a.states[i].state.amplitudes().dot(a.states[k].state.amplitudes());
      EXPECT_NEAR(std::abs(ip - (i == k ? 1.0 : 0.0)), 0.0, 1e-12);
    }
  }
}

TEST(Assemble, SumOfFourStates) {
  const BellAssembly a = assemble_bell(enumerate_cnot_terms(kControls, kTargets));
  // (00+11) + (00-11) + (01+10) + (01-10) = 2|00> + 2|01>, in units of 1/sqrt 2.
  EXPECT_EQ(a.sum, (std::vector<std::pair<int, int>>{{0, 2}, {1, 2}}));
}

TEST(Assemble, MissingTermIsNamed) {
  auto terms = enumerate_cnot_terms(kControls, kTargets);
  terms.erase(std::remove_if(terms.begin(), terms.end(),
                             [](const BranchTerm& t) { return t.label() == "C[B--A-]"; }),
              terms.end());
  try {
    assemble_bell(terms);
    FAIL() << "expected AssemblyError";
  } catch (const AssemblyError& e) {
    EXPECT_NE(std::string(e.what()).find("C[B--A-]"), std::string::npos);
  }
}

TEST(Assemble, FlippingBMinusMinusFlipsRelativePhase) {
  TokenTable flipped;
  flipped.control["B--"] = {1, 1};
  const BellAssembly base = assemble_bell(enumerate_cnot_terms(kControls, kTargets));
  const BellAssembly alt = assemble_bell(enumerate_cnot_terms(kControls, kTargets, flipped), flipped);
  // Phi- and Psi- change the sign of exactly their |1.> component.
  EXPECT_EQ(coeff(alt.states[1].exact, 3), -coeff(base.states[1].exact, 3));
  EXPECT_EQ(coeff(alt.states[1].exact, 0), coeff(base.states[1].exact, 0));
  EXPECT_EQ(coeff(alt.states[3].exact, 2), -coeff(base.states[3].exact, 2));
  EXPECT_EQ(coeff(alt.states[3].exact, 1), coeff(base.states[3].exact, 1));
  // Phi+ and Psi+ do not involve B--.
  EXPECT_EQ(alt.states[0].exact.size(), base.states[0].exact.size());
  EXPECT_EQ(coeff(alt.states[0].exact, 3), coeff(base.states[0].exact, 3));
}

TEST(Assemble, ConstructiveTableIsRejected) {
  TokenTable bad;
  bad.control["B++"] = {1, 0};  // B+ and B++ both |0>
  EXPECT_THROW(assemble_bell(enumerate_cnot_terms(kControls, kTargets, bad), bad), AssemblyError);
}

TEST(Compile, TokenCounts) {
  const PulseProgram p = compile_bell_sequence({});
  EXPECT_EQ(p.count("hadamard"), 2u);
  EXPECT_EQ(p.count("branch:"), 3u);  // R(180) R(180) for B+, R(90) for B++
  EXPECT_EQ(p.count("branch:B+"), 3u);
  EXPECT_EQ(p.count("branch:B++"), 1u);
  EXPECT_EQ(p.count("target"), 4u);
  // Control tokens precede target tokens.
  bool seen_target = false;
  for (const auto& q : p.pulses) {
    if (q.channel == Channel::target_line) seen_target = true;
    if (seen_target) {
      EXPECT_EQ(q.channel, Channel::target_line);
    }
  }
}

TEST(Compile, NoHadamardIsTargetOnly) {
  CircuitProgram c;
  c.hadamard = false;
  const PulseProgram p = compile_bell_sequence(c);
  EXPECT_EQ(p.pulses.size(), 4u);
  for (const auto& q : p.pulses) EXPECT_EQ(q.channel, Channel::target_line);
}

TEST(Verify, PhiPlusFromZeroZero) {
  const VerificationReport r = verify_compiled(compile_bell_sequence({}));
  EXPECT_EQ(r.expected_label, "Phi+");
  EXPECT_GE(r.fidelity, 1 - 1e-12);
  EXPECT_TRUE(r.passed);
  const double s = std::sqrt(0.5);
  EXPECT_NEAR(std::abs(r.output[0]), s, 1e-12);
  EXPECT_NEAR(std::abs(r.output[3]), s, 1e-12);
}

TEST(Verify, AllInputsBothSubstitutions) {
  const auto bell = spin::bell_states();
  for (Basis b1 : {Basis::zero, Basis::one}) {
    for (Basis b2 : {Basis::zero, Basis::one}) {
      double fid[2];
      for (int sub = 0; sub < 2; ++sub) {
        CircuitProgram c;
        c.phi1 = b1;
        c.phi2 = b2;
        c.substitute_y = sub == 1;
        const VerificationReport r = verify_compiled(compile_bell_sequence(c));
        const std::size_t idx = static_cast<std::size_t>(bit(b1) + 2 * bit(b2));
        EXPECT_EQ(r.expected_label, bell[idx].label);
        fid[sub] = spin::state_fidelity(r.output, bell[idx].state);
        EXPECT_GE(fid[sub], 1 - 1e-12);
      }
      EXPECT_NEAR(fid[0], fid[1], 1e-12);
    }
  }
}

TEST(Verify, IdentityProgram) {
  CircuitProgram c;
  c.hadamard = false;
  c.cnot = false;
  const VerificationReport r = verify_compiled(compile_bell_sequence(c));
  EXPECT_EQ(r.fidelity, 1.0);
  EXPECT_GE(spin::state_fidelity(r.output, spin::StateVector::basis(2, 0)), 1.0);
}

TEST(Verify, CnotOnlyFlipsTarget) {
  CircuitProgram c;
  c.hadamard = false;
  c.phi1 = Basis::one;
  const VerificationReport r = verify_compiled(compile_bell_sequence(c));
  EXPECT_GE(spin::state_fidelity(r.output, spin::StateVector::from_bits("11")), 1 - 1e-12);
}

TEST(Verify, TargetQuadrupoleNetIsNot) {
  const VerificationReport r = verify_compiled(compile_bell_sequence({}));
  ASSERT_TRUE(r.target.has_value());
  EXPECT_EQ(r.target->net_class, "NOT");
  // Oracle product of the four rotations, in time order.
  const Matrix u = oracle::rotation('x', -std::numbers::pi / 2) * oracle::rotation('y', std::numbers::pi) *
                   oracle::rotation('z', std::numbers::pi) * oracle::rotation('x', std::numbers::pi / 2);
  const NetTargetReport o = classify_target(u);
  EXPECT_EQ(o.net_class, "NOT");
  EXPECT_NEAR(std::abs(o.phase - r.target->phase), 0.0, 1e-12);
}

TEST(Verify, CompiledUnitaryMatchesOracleProduct) {
  // Bell circuit as plain gates: CNOT (H x I).
  Matrix hi = Matrix::Zero(4, 4);
  const double s = std::sqrt(0.5);
  hi << s, 0, s, 0, 0, s, 0, s, s, 0, -s, 0, 0, s, 0, -s;
  Matrix cx = Matrix::Zero(4, 4);
  cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1.0;
  const Matrix ref = cx * hi;
  for (Basis b1 : {Basis::zero, Basis::one}) {
    for (Basis b2 : {Basis::zero, Basis::one}) {
      CircuitProgram c;
      c.phi1 = b1;
      c.phi2 = b2;
      const VerificationReport r = verify_compiled(compile_bell_sequence(c));
      spin::Vector e = spin::Vector::Zero(4);
      e[bit(b1) * 2 + bit(b2)] = 1.0;
      EXPECT_GE(spin::state_fidelity(r.output, spin::StateVector(ref * e)), 1 - 1e-12);
    }
  }
}

TEST(Lower, MissingAxisIsCompilationError) {
  CompiledPulse p;
  p.kind = TokenKind::r90;
  EXPECT_THROW(lower_pulse(p), CompilationError);
  PulseProgram prog = compile_bell_sequence({});
  prog.pulses[1].axis.reset();
  EXPECT_THROW(verify_compiled(prog), CompilationError);
}

TEST(Lower, MinusR90IsSignedAmplitude) {
  CompiledPulse p{Channel::control_line, TokenKind::minus_r90, Axis::z, false, 0, "x"};
  CompiledPulse q{Channel::control_line, TokenKind::r90, Axis::z, false, 0, "x"};
  EXPECT_LE(spin::max_abs_diff(lower_pulse(p).matrix(), -lower_pulse(q).matrix()), 1e-15);
}

TEST(Json, ProgramLayout) {
  const nlohmann::json j = to_json(compile_bell_sequence({}));
  EXPECT_EQ(j["schema"], "mrqsim.pulse_program/1");
  EXPECT_EQ(j["lowering_table_version"], kLoweringTableVersion);
  EXPECT_EQ(j["token_counts"]["target"], 4);
  EXPECT_EQ(j["pulses"].size(), 9u);
}

}  // namespace
}  // namespace mrqsim::pulse
