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

// Composite sequences built on the Bloch executor: the modified stimulated
// echo with phase-window selection, and the T1-recovery Hadamard.

#pragma once

#include <numbers>
#include <vector>

#include "mrqsim/bloch_sim.hpp"

namespace mrqsim::bloch {

struct StimulatedEchoTiming {
  double t_a1 = 0.0;
  double t_a2 = 0.0;
  double t_a3 = 0.0;
  double t_a4 = 0.0;
};

struct StimulatedEchoOptions {
  /// Center of the selection window. The selected group sits at +pi/2 after
  /// the first refocusing pulse when there is no off-resonance.
  double axis_phase = std::numbers::pi / 2.0;
  double window = std::numbers::pi;  // half-width
  bool refocusing = true;
  Axis refocus_axis = Axis::x;
  int repetitions = 1;
};

struct PurificationTrace {
  std::vector<double> stage_fractions;
  double cumulative_factor = 1.0;
  std::vector<double> echo_times;
  std::vector<double> echo_phases;      // atan2 of the net transverse component
  std::vector<double> echo_amplitudes;  // net transverse magnitude
  /// Coefficient c such that a uniform shift delta adds -c * delta to the
  /// echo phase: t_a1 - t_a2 - t_a3 + t_a4 with refocusing, the plain sum
  /// of the intervals without.
  double residual_phase_coefficient = 0.0;
  bool empty = false;
  std::vector<TrajectorySample> trajectory;
  Ensemble final_ensemble;
};

/// Throws ConfigError unless t_a1 == t_a3 and all intervals are finite and
/// >= 0, or if repetitions < 1.
void validate_timing(const StimulatedEchoTiming& timing, const StimulatedEchoOptions& options);

/// Per repetition: 90x, t_a1, 180, t_a2, select, t_a3, 180, t_a4, acquire,
/// 90x. The select step spares the isochromats inside the window and tips
/// the rest out of the transverse plane, where they are dropped. One
/// repetition inverts the stored magnetization, so odd repetitions center the
/// window at axis_phase + pi.
PurificationTrace modified_stimulated_echo(Ensemble ensemble, const StimulatedEchoTiming& timing,
                                           const StimulatedEchoOptions& options = {},
                                           const SamplingOptions& sampling = {},
                                           const Executor& exec = {});

struct CompensationCheck {
  std::vector<double> shifts;                 // rad/s
  std::vector<double> phase_error_refocused;  // echo phase minus the zero-shift phase
  std::vector<double> phase_error_plain;      // same, 180 pulses removed
  double max_error_refocused = 0.0;
  double slope_plain = 0.0;  // least-squares d(error)/d(shift), s
  double linearity_residual = 0.0;  // max deviation of plain errors from the fit line
};

/// Runs the echo with and without refocusing for each uniform shift added to
/// every isochromat, comparing echo phases against the unshifted run.
/// Phase differences are wrapped to (-pi, pi].
CompensationCheck echo_compensation_check(const Ensemble& ensemble,
                                          const StimulatedEchoTiming& timing,
                                          const StimulatedEchoOptions& options,
                                          const std::vector<double>& shifts,
                                          const Executor& exec = {});

inline constexpr double kT1CoincidenceFactor = 0.693;

struct T1HadamardReport {
  double coincidence_time = 0.0;
  double mz_at_coincidence = 0.0;
  Vec3 m_at_coincidence = Vec3::Zero();
  Vec3 final_m = Vec3::Zero();
  /// Cosine between the final net magnetization and +x, the Bloch direction
  /// of H|0>. Zero when the final vector vanishes.
  double alignment_with_x = 0.0;
  std::vector<TrajectorySample> trajectory;
  Ensemble final_ensemble;
};

/// Ry(90) -> delay(0.693 T1) -> Ry(90). Requires every isochromat at
/// (0, 0, 1) and a finite T1; throws DomainError otherwise.
/// `samples` points are taken inside the delay (0 = event boundaries only).
T1HadamardReport t1_recovery_hadamard(Ensemble ensemble, std::size_t samples = 0,
                                      const Executor& exec = {});

}  // namespace mrqsim::bloch
