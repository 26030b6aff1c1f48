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

#include "mrqsim/purification.hpp"

#include <algorithm>
#include <sstream>

#include "mrqsim/errors.hpp"

namespace mrqsim::bloch {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double wrap(double phase) { return std::remainder(phase, 2.0 * std::numbers::pi); }

std::vector<SequenceEvent> echo_events(const StimulatedEchoTiming& t,
                                       const StimulatedEchoOptions& o) {
  std::vector<SequenceEvent> ev;
  for (int r = 0; r < o.repetitions; ++r) {
    ev.emplace_back(RfPulse{Axis::x, kHalfPi});
    ev.emplace_back(Delay{t.t_a1});
    if (o.refocusing) ev.emplace_back(RfPulse{o.refocus_axis, std::numbers::pi});
    ev.emplace_back(Delay{t.t_a2});
    // Each repetition nets a 180x on the stored group, so the refocused
    // group alternates between axis_phase and axis_phase + pi.
    ev.emplace_back(Select{wrap(o.axis_phase + std::numbers::pi * (r % 2)), o.window});
    ev.emplace_back(Delay{t.t_a3});
    if (o.refocusing) ev.emplace_back(RfPulse{o.refocus_axis, std::numbers::pi});
    ev.emplace_back(Delay{t.t_a4});
    ev.emplace_back(Acquire{"echo"});
    ev.emplace_back(RfPulse{Axis::x, kHalfPi});
  }
  return ev;
}

}  // namespace

void validate_timing(const StimulatedEchoTiming& t, const StimulatedEchoOptions& o) {
  const double all[] = {t.t_a1, t.t_a2, t.t_a3, t.t_a4};
  for (double d : all) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw ConfigError("stimulated echo: intervals t_a1..t_a4 must be finite and >= 0");
    }
  }
  if (t.t_a1 != t.t_a3) {
    std::ostringstream msg;
    msg << "stimulated echo: timing constraint t_a1 == t_a3 violated (t_a1 = " << t.t_a1
        << " s, t_a3 = " << t.t_a3 << " s)";
    throw ConfigError(msg.str());
  }
  if (o.repetitions < 1) throw ConfigError("stimulated echo: repetitions must be >= 1");
  if (!(o.window > 0.0 && o.window <= std::numbers::pi)) {
    throw ConfigError("stimulated echo: window half-width must lie in (0, pi]");
  }
  if (!std::isfinite(o.axis_phase)) throw ConfigError("stimulated echo: axis_phase must be finite");
}

PurificationTrace modified_stimulated_echo(Ensemble ensemble, const StimulatedEchoTiming& timing,
                                           const StimulatedEchoOptions& options,
                                           const SamplingOptions& sampling, const Executor& exec) {
  validate_timing(timing, options);
  SequenceOutcome run =
      run_sequence(std::move(ensemble), echo_events(timing, options), sampling, exec);

  PurificationTrace out;
  out.stage_fractions = run.selected_fractions;
  for (double f : out.stage_fractions) out.cumulative_factor *= f;
  for (const auto& a : run.acquisitions) {
    out.echo_times.push_back(a.t);
    out.echo_phases.push_back(std::atan2(a.m.y(), a.m.x()));
    out.echo_amplitudes.push_back(std::hypot(a.m.x(), a.m.y()));
  }
  out.residual_phase_coefficient =
      options.refocusing ? timing.t_a1 - timing.t_a2 - timing.t_a3 + timing.t_a4
                         : timing.t_a1 + timing.t_a2 + timing.t_a3 + timing.t_a4;
  out.empty = run.emptied;
  out.trajectory = std::move(run.trajectory);
  out.final_ensemble = std::move(run.final_ensemble);
  return out;
}

CompensationCheck echo_compensation_check(const Ensemble& ensemble,
                                          const StimulatedEchoTiming& timing,
                                          const StimulatedEchoOptions& options,
                                          const std::vector<double>& shifts,
                                          const Executor& exec) {
  if (shifts.size() < 2) throw ConfigError("compensation check: need at least two shifts");
  for (double s : shifts) {
    if (!std::isfinite(s)) throw ConfigError("compensation check: shifts must be finite");
  }

  auto shifted = [&](double shift) {
    auto isos = ensemble.isochromats();
    for (auto& iso : isos) iso.delta_omega += shift;
    return Ensemble(std::move(isos), ensemble.t1(), ensemble.t2(), ensemble.population());
  };
  auto final_phase = [&](const Ensemble& e, bool refocus) {
    StimulatedEchoOptions o = options;
    o.refocusing = refocus;
    const PurificationTrace tr = modified_stimulated_echo(e, timing, o, {}, exec);
    if (tr.empty || tr.echo_phases.empty()) {
      throw InvariantError("compensation check: selection window emptied the ensemble");
    }
    return tr.echo_phases.back();
  };

  CompensationCheck out;
  out.shifts = shifts;
  const double ref_on = final_phase(ensemble, true);
  const double ref_off = final_phase(ensemble, false);
  for (double s : shifts) {
    const Ensemble e = shifted(s);
    out.phase_error_refocused.push_back(wrap(final_phase(e, true) - ref_on));
    out.phase_error_plain.push_back(wrap(final_phase(e, false) - ref_off));
    out.max_error_refocused =
        std::max(out.max_error_refocused, std::abs(out.phase_error_refocused.back()));
  }

  // Least-squares line through the plain errors.
  const double n = static_cast<double>(shifts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    sx += shifts[i];
    sy += out.phase_error_plain[i];
    sxx += shifts[i] * shifts[i];
    sxy += shifts[i] * out.phase_error_plain[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ConfigError("compensation check: shifts must not all be equal");
  out.slope_plain = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - out.slope_plain * sx) / n;
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    out.linearity_residual =
        std::max(out.linearity_residual,
                 std::abs(out.phase_error_plain[i] - (intercept + out.slope_plain * shifts[i])));
  }
  return out;
}

T1HadamardReport t1_recovery_hadamard(Ensemble ensemble, std::size_t samples,
                                      const Executor& exec) {
  if (!std::isfinite(ensemble.t1())) {
    throw DomainError("t1_recovery_hadamard: T1 must be finite");
  }
  if (ensemble.empty()) throw DomainError("t1_recovery_hadamard: ensemble is empty");
  for (const auto& iso : ensemble.isochromats()) {
    if ((iso.m - Vec3(0.0, 0.0, 1.0)).cwiseAbs().maxCoeff() > 1e-12) {
      throw DomainError("t1_recovery_hadamard: ensemble must start at equilibrium (0, 0, 1)");
    }
  }

  T1HadamardReport out;
  out.coincidence_time = kT1CoincidenceFactor * ensemble.t1();
  SamplingOptions sampling;
  if (samples > 0) sampling.sample_interval = out.coincidence_time / static_cast<double>(samples);

  const std::vector<SequenceEvent> events = {
      RfPulse{Axis::y, kHalfPi},
      Delay{out.coincidence_time},
      Acquire{"coincidence"},
      RfPulse{Axis::y, kHalfPi},
  };
  SequenceOutcome run = run_sequence(std::move(ensemble), events, sampling, exec);

  out.m_at_coincidence = run.acquisitions.front().m;
  out.mz_at_coincidence = out.m_at_coincidence.z();
  out.final_m = run.final_ensemble.net_magnetization();
  const double norm = out.final_m.norm();
  out.alignment_with_x = norm > 0.0 ? out.final_m.x() / norm : 0.0;
  out.trajectory = std::move(run.trajectory);
  out.final_ensemble = std::move(run.final_ensemble);
  return out;
}

}  // namespace mrqsim::bloch
