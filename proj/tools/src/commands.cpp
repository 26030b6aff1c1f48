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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include <openssl/evp.h>

#include "mrqsim/circuit_text.hpp"
#include "mrqsim/cli/app.hpp"
#include "mrqsim/errors.hpp"
#include "mrqsim/spin_json.hpp"

namespace mrqsim::cli {

namespace {

using nlohmann::json;

json vec3(const bloch::Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantError(what);
}

// Everything a command needs, built and validated before any simulation.
struct Prepared {
  Scenario scenario;
  std::uint64_t seed = 1;
  Executor exec;
};

Prepared prepare(std::string_view text, const RunOptions& options) {
  Prepared p;
  p.scenario = load_scenario(text);
  if (options.threads == 0) throw ConfigError("--threads: must be >= 1");
  p.exec.threads = options.threads;
  if (options.seed) {
    p.seed = *options.seed;
  } else if (p.scenario.seed) {
    p.seed = *p.scenario.seed;
  } else if (p.scenario.ensemble) {
    p.seed = p.scenario.ensemble->config.seed;
  }
  if (p.scenario.ensemble) p.scenario.ensemble->config.seed = p.seed;
  return p;
}

const EnsembleSection& need_ensemble(const Scenario& s, const char* command) {
  if (!s.ensemble) throw ConfigError(std::string("ensemble: section required by '") + command + "'");
  return *s.ensemble;
}

bloch::PopulationSummary population_for(const Scenario& s) {
  if (!s.ensemble || !s.ensemble->population) return {};
  const PopulationSection& p = *s.ensemble->population;
  double b0 = 0.0;
  if (p.b0) {
    b0 = *p.b0;
  } else if (s.magnet) {
    b0 = s.magnet->system.b0;
  } else {
    throw ConfigError("ensemble.population.b0_T: required when there is no magnet section");
  }
  const double gamma = s.magnet ? s.magnet->system.gamma : field::kProtonGamma;
  return bloch::thermal_population(p.n_total, b0, gamma, p.temperature_kelvin);
}

json population_json(const bloch::PopulationSummary& p) {
  return {{"n_total", p.n_total},
          {"n_low", p.n_low},
          {"n_high", p.n_high},
          {"polarized_excess", p.polarized_excess()},
          {"selected_x", p.selected_x},
          {"selected_y", p.selected_y}};
}

// --- field -------------------------------------------------------------------

RunResult cmd_field(const Prepared& p) {
  if (!p.scenario.magnet) throw ConfigError("magnet: section required by 'field'");
  const MagnetSection& m = *p.scenario.magnet;
  RunResult r;
  r.outputs["field_report"] = field::field_report(m.system, m.samples_per_site);
  return r;
}

// --- gate --------------------------------------------------------------------

RunResult cmd_gate(const Prepared& p) {
  using namespace spin;
  const UnitaryGate rx = rotation_gate(Axis::x, std::numbers::pi);
  const UnitaryGate ry = rotation_gate(Axis::y, std::numbers::pi / 2.0);
  const UnitaryGate h = hadamard_via_rotations();
  const UnitaryGate hc = canonical_hadamard();
  const double h_diff = max_abs_diff(h.matrix(), hc.matrix());

  const double r2 = std::numbers::sqrt2 / 2.0;
  const StateVector plus_x(Vector{{r2, r2}});
  const StateVector minus_x(Vector{{r2, -r2}});
  const StateVector h0 = h.apply(StateVector::basis(1, 0));
  const StateVector h1 = h.apply(StateVector::basis(1, 1));

  const UnitaryGate cnot = cnot_gate(0, 1, 2);
  const UnitaryGate circuit = cnot * embed(h, 0, 2);
  const auto bells = bell_states();
  json bell = json::array();
  double worst_bell = 1.0;
  for (std::size_t i = 0; i < 4; ++i) {
    // Inputs |00>, |10>, |01>, |11> give Phi+, Phi-, Psi+, Psi-.
    const std::size_t index = (i & 1) * 2 + (i >> 1);
    const StateVector out = circuit.apply(StateVector::basis(2, index));
    const double f = state_fidelity(out, bells[i].state);
    worst_bell = std::min(worst_bell, f);
    bell.push_back({{"input", std::string("|") + std::to_string(index >> 1) +
                                  std::to_string(index & 1) + ">"},
                    {"label", bells[i].label},
                    {"output", out},
                    {"fidelity", f}});
  }

  const GateSection& g = p.scenario.gate;
  const StateVector psi = StateVector::from_bits(g.pure_state_bits);
  const PseudoPureSpec spec = PseudoPureSpec::from_epsilon(g.epsilon, psi);
  const DensityMatrix rho = pseudo_pure_density(spec);
  const UnitaryGate hq = embed(h, 0, psi.n_qubits());
  const DensityMatrix rho_h = conjugate_density(rho, hq);
  const PseudoPureDecomposition dec = decompose_pseudo_pure(rho_h);

  RunResult r;
  r.outputs = {
      {"rx_pi", rx},
      {"ry_half_pi", ry},
      {"hadamard_via_rotations", h},
      {"canonical_hadamard", hc},
      {"hadamard_max_abs_diff", h_diff},
      {"h_on_0", {{"state", h0}, {"fidelity_plus_x", state_fidelity(h0, plus_x)}}},
      {"h_on_1", {{"state", h1}, {"fidelity_minus_x", state_fidelity(h1, minus_x)}}},
      {"cnot", cnot},
      {"bell", bell},
      {"pseudo_pure",
       {{"epsilon", spec.epsilon()},
        {"pure_state", psi},
        {"rho", rho},
        {"rho_after_h", rho_h},
        {"recovered_epsilon", dec.epsilon},
        {"structure_residual", dec.residual},
        {"purity_before", rho.purity()},
        {"purity_after", rho_h.purity()}}},
  };
  require(h_diff <= kUnitaryTolerance, "gate: i Rx(pi) Ry(pi/2) differs from H by more than 1e-12");
  require(worst_bell >= 1.0 - 1e-12, "gate: Bell circuit fidelity below 1 - 1e-12");
  return r;
}

// --- purify ------------------------------------------------------------------

RunResult cmd_purify(const Prepared& p) {
  const Scenario& s = p.scenario;
  const EnsembleSection& es = need_ensemble(s, "purify");
  if (!s.echo) throw ConfigError("sequence.stimulated_echo: section required by 'purify'");
  const EchoSection& echo = *s.echo;
  bloch::EnsembleConfig cfg = es.config;
  cfg.population = population_for(s);

  bloch::SamplingOptions sampling;
  sampling.sample_interval = s.output.sample_interval;
  sampling.timing_jitter = s.output.timing_jitter;
  sampling.jitter_seed = s.output.jitter_seed.value_or(p.seed);

  bloch::Ensemble ensemble = bloch::make_ensemble(cfg);
  const std::vector<std::string> warnings = ensemble.warnings();
  bloch::PurificationTrace trace =
      bloch::modified_stimulated_echo(std::move(ensemble), echo.timing, echo.options, sampling, p.exec);

  // Compensation probe: one on-resonance isochromat, window wide open, so
  // every shift stays selected and only the refocusing differs.
  const bloch::Ensemble probe({bloch::Isochromat{{0.0, 0.0, 1.0}, 0.0, 1.0}}, cfg.t1, cfg.t2);
  bloch::StimulatedEchoOptions probe_options = echo.options;
  probe_options.window = std::numbers::pi;
  const bloch::CompensationCheck comp = bloch::echo_compensation_check(
      probe, echo.timing, probe_options, echo.compensation_shifts, p.exec);

  // Pseudo-pure ledger, one purify_step per stage.
  json ledger = json::array();
  spin::PseudoPureSpec spec = spin::PseudoPureSpec::from_epsilon(echo.epsilon0, spin::StateVector::basis(1, 0));
  const double impure0 = spec.impure_fraction();
  ledger.push_back({{"step", 0}, {"impure_fraction", impure0}, {"epsilon", spec.epsilon()}});
  for (int k = 1; k <= echo.purify_steps; ++k) {
    spec = spin::purify_step(spec, echo.purify_factor);
    ledger.push_back({{"step", k},
                      {"impure_fraction", spec.impure_fraction()},
                      {"closed_form", impure0 * std::pow(echo.purify_factor, k)},
                      {"epsilon", spec.epsilon()}});
  }

  bloch::PopulationSummary pop = cfg.population;
  const double selected = pop.polarized_excess() * trace.cumulative_factor;
  pop.selected_x = selected * std::abs(std::cos(echo.options.axis_phase));
  pop.selected_y = selected * std::abs(std::sin(echo.options.axis_phase));

  RunResult r;
  r.outputs = {
      {"timing",
       {{"t_a1_s", echo.timing.t_a1},
        {"t_a2_s", echo.timing.t_a2},
        {"t_a3_s", echo.timing.t_a3},
        {"t_a4_s", echo.timing.t_a4}}},
      {"ensemble_size", cfg.size},
      {"warnings", warnings},
      {"stage_fractions", trace.stage_fractions},
      {"cumulative_factor", trace.cumulative_factor},
      {"empty", trace.empty},
      {"selected_isochromats", trace.final_ensemble.size()},
      {"echo_times_s", trace.echo_times},
      {"echo_phases_rad", trace.echo_phases},
      {"echo_amplitudes", trace.echo_amplitudes},
      {"residual_phase_coefficient_s", trace.residual_phase_coefficient},
      {"final_net_magnetization", vec3(trace.final_ensemble.net_magnetization())},
      {"compensation",
       {{"shifts_rad_per_s", comp.shifts},
        {"phase_error_refocused_rad", comp.phase_error_refocused},
        {"phase_error_plain_rad", comp.phase_error_plain},
        {"max_error_refocused_rad", comp.max_error_refocused},
        {"slope_plain_s", comp.slope_plain},
        {"linearity_residual_rad", comp.linearity_residual}}},
      {"epsilon_ledger", ledger},
      {"population", population_json(pop)},
  };
  if (s.output.trajectory_csv) r.files["trajectory.csv"] = trajectory_csv(trace.trajectory);
  return r;
}

// --- bell --------------------------------------------------------------------

RunResult cmd_bell(const Prepared& p) {
  using namespace pulse;
  const CircuitProgram& prog = p.scenario.bell.program;
  const PulseProgram compiled = compile_bell_sequence(prog);
  const VerificationReport report = verify_compiled(compiled);

  const BellAssembly assembly =
      assemble_bell(enumerate_cnot_terms({"B+", "B-", "B++", "B--"}, {"A+", "A-"}));
  double ortho = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      const spin::Complex ip =
          assembly.states[i].state.amplitudes().dot(assembly.states[k].state.amplitudes());
      ortho = std::max(ortho, std::abs(ip - (i == k ? 1.0 : 0.0)));
    }
  }

  json all = json::array();
  double worst = 1.0, subst = 0.0;
  for (Basis b2 : {Basis::zero, Basis::one}) {
    for (Basis b1 : {Basis::zero, Basis::one}) {
      CircuitProgram c{b1, b2, true, true, false};
      const double fz = verify_compiled(compile_bell_sequence(c)).fidelity;
      c.substitute_y = true;
      const double fy = verify_compiled(compile_bell_sequence(c)).fidelity;
      worst = std::min({worst, fz, fy});
      subst = std::max(subst, std::abs(fz - fy));
      all.push_back({{"control", to_string(b1)},
                     {"target", to_string(b2)},
                     {"expected", expected_bell_label(b1, b2)},
                     {"fidelity_R_zB", fz},
                     {"fidelity_R_yB", fy}});
    }
  }

  RunResult r;
  r.outputs = {{"program_text", format_circuit(prog)},
               {"pulse_program", to_json(compiled)},
               {"verification", to_json(report)},
               {"assembly", to_json(assembly)},
               {"orthonormality_max_error", ortho},
               {"all_inputs", all},
               {"substitution_max_fidelity_diff", subst}};
  r.files["pulse_program.json"] = to_json(compiled).dump(2) + "\n";
  require(report.passed, "bell: compiled program fidelity " + std::to_string(report.fidelity) +
                             " below 1 - 1e-12");
  require(worst >= kFidelityThreshold, "bell: a basis input pair missed its Bell state");
  return r;
}

// --- t1had -------------------------------------------------------------------

RunResult cmd_t1had(const Prepared& p) {
  const EnsembleSection& es = need_ensemble(p.scenario, "t1had");
  if (!std::isfinite(es.config.t1)) throw ConfigError("ensemble.t1_s: 't1had' needs a finite T1");
  bloch::EnsembleConfig cfg = es.config;
  cfg.population = population_for(p.scenario);
  const bloch::T1HadamardReport rep =
      bloch::t1_recovery_hadamard(bloch::make_ensemble(cfg), p.scenario.t1had.samples, p.exec);

  RunResult r;
  r.outputs = {{"t1_s", cfg.t1},
               {"t2_s", std::isfinite(cfg.t2) ? json(cfg.t2) : json("inf")},
               {"coincidence_factor", bloch::kT1CoincidenceFactor},
               {"coincidence_time_s", rep.coincidence_time},
               {"mz_at_coincidence", rep.mz_at_coincidence},
               {"expected_mz", -std::expm1(-bloch::kT1CoincidenceFactor)},
               {"m_at_coincidence", vec3(rep.m_at_coincidence)},
               {"final_magnetization", vec3(rep.final_m)},
               {"alignment_with_x", rep.alignment_with_x},
               {"trajectory_samples", rep.trajectory.size()}};
  if (p.scenario.output.trajectory_csv) r.files["trajectory.csv"] = trajectory_csv(rep.trajectory);
  require(std::abs(rep.mz_at_coincidence - 0.5) <= 1e-3,
          "t1had: Mz at the coincidence time is not within 1e-3 of 0.5");
  return r;
}

}  // namespace

nlohmann::json RunResult::to_json() const {
  return {{"schema", kResultSchema},
          {"command", command},
          {"input_digest", input_digest},
          {"outputs", outputs}};
}

std::string RunResult::serialize() const { return to_json().dump(2) + "\n"; }

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"field", "gate", "purify", "bell", "t1had"};
  return names;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string trajectory_csv(const std::vector<bloch::TrajectorySample>& samples) {
  std::string out = "t_s,Mx,My,Mz\n";
  char buf[128];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.t, s.m.x(), s.m.y(), s.m.z());
    out += buf;
  }
  return out;
}

RunResult run_command(std::string_view command, std::string_view scenario_text,
                      const RunOptions& options) {
  static const std::map<std::string, std::function<RunResult(const Prepared&)>, std::less<>>
      table = {{"field", cmd_field},
               {"gate", cmd_gate},
               {"purify", cmd_purify},
               {"bell", cmd_bell},
               {"t1had", cmd_t1had}};
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("unknown command '" + std::string(command) + "'");

  const Prepared prepared = prepare(scenario_text, options);
  RunResult r = it->second(prepared);
  r.command = std::string(command);
  r.input_digest = sha256_hex(std::string(scenario_text) + "\n#seed=" + std::to_string(prepared.seed));
  return r;
}

}  // namespace mrqsim::cli
