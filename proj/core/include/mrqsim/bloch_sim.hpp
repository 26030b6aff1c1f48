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

// Classical isochromat ensemble under hard pulses, free precession and
// T1/T2 relaxation, evaluated event by event in closed form.
//
// Conventions:
//  * Magnetization is relative to M0 = 1; equilibrium is (0, 0, 1).
//  * A pulse about axis a by angle theta is the right-handed rotation of the
//    magnetization vector, so 90 degrees about x takes +z to -y.
//  * Free precession advances the transverse phase atan2(My, Mx) by
//    -delta_omega * t (rotation about +z by -delta_omega * t).
//  * Relaxation: M_xy *= exp(-t/T2), Mz -> 1 - (1 - Mz) exp(-t/T1).
//    T1 or T2 may be +infinity.
//  * Pulses are instantaneous; nothing relaxes during a pulse.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "mrqsim/parallel.hpp"
#include "mrqsim/spin_core.hpp"

namespace mrqsim::bloch {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using spin::Axis;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Transverse magnitude below which an isochromat has no defined phase.
inline constexpr double kPhaseFloor = 1e-12;

struct Isochromat {
  Vec3 m{0.0, 0.0, 1.0};
  double delta_omega = 0.0;  // rad/s
  double weight = 0.0;

  double transverse() const { return std::hypot(m.x(), m.y()); }
  double phase() const { return std::atan2(m.y(), m.x()); }
};

/// Spin-count bookkeeping. Counts are far beyond what is simulated and carry
/// no dynamics; they are reported alongside simulation results.
struct PopulationSummary {
  double n_total = 0.0;
  double n_low = 0.0;       // low-energy (aligned) population
  double n_high = 0.0;      // high-energy population
  double selected_x = 0.0;  // selected x-component group
  double selected_y = 0.0;  // selected y-component group

  double polarized_excess() const { return n_low - n_high; }

  /// n_low + n_high <= n_total, n_low >= n_high, all counts >= 0.
  /// Throws ConfigError.
  void validate() const;
};

/// Boltzmann populations of a spin-1/2 ensemble at field b0 and temperature:
/// polarization P = tanh(hbar gamma b0 / (2 k T)), n_low = N (1 + P) / 2.
PopulationSummary thermal_population(double n_total, double b0, double gamma,
                                     double temperature_kelvin);

class Ensemble {
 public:
  Ensemble() = default;

  /// Requires t1 > 0, t2 > 0, weights >= 0 summing to 1 within 1e-12
  /// (an empty ensemble is allowed). Throws ConfigError.
  Ensemble(std::vector<Isochromat> isochromats, double t1, double t2,
           PopulationSummary population = {});

  const std::vector<Isochromat>& isochromats() const { return isochromats_; }
  std::vector<Isochromat>& isochromats() { return isochromats_; }
  std::size_t size() const { return isochromats_.size(); }
  bool empty() const { return isochromats_.empty(); }

  double t1() const { return t1_; }
  double t2() const { return t2_; }
  const PopulationSummary& population() const { return population_; }
  PopulationSummary& population() { return population_; }

  /// Non-fatal configuration notes, e.g. T2 > T1.
  std::vector<std::string> warnings() const;

  /// Weighted sum of magnetization vectors (pairwise summation).
  Vec3 net_magnetization() const;

 private:
  std::vector<Isochromat> isochromats_;
  double t1_ = kInfinity;
  double t2_ = kInfinity;
  PopulationSummary population_;
};

enum class OffResonanceDistribution { uniform, gaussian };

struct EnsembleConfig {
  std::size_t size = 100000;
  double t1 = kInfinity;
  double t2 = kInfinity;
  /// Uniform: half-width of [-max, +max]. Gaussian: standard deviation.
  double off_resonance = 0.0;  // rad/s
  OffResonanceDistribution distribution = OffResonanceDistribution::uniform;
  std::uint64_t seed = 1;
  PopulationSummary population;
};

/// Equally weighted ensemble at equilibrium with off-resonance drawn from a
/// seeded mt19937_64 stream. Identical config gives identical ensembles on
/// every platform.
Ensemble make_ensemble(const EnsembleConfig& config);

/// Right-handed rotation of a vector about `axis` by `angle`.
Mat3 rotation_matrix(Axis axis, double angle);

Ensemble apply_pulse(Ensemble ensemble, Axis axis, double angle, const Executor& exec = {});

/// Throws DomainError for a negative or non-finite duration.
Ensemble free_evolve(Ensemble ensemble, double duration, const Executor& exec = {});

struct SpinEchoResult {
  Ensemble ensemble;
  double initial_amplitude = 0.0;  // |net transverse| before the sequence
  double echo_amplitude = 0.0;     // |net transverse| at 2 tau
};

/// delay(tau) -> 180 about x -> delay(tau).
SpinEchoResult spin_echo(Ensemble ensemble, double tau, const Executor& exec = {});

struct SelectionResult {
  Ensemble ensemble;
  double selected_fraction = 0.0;   // kept weight before renormalization
  double discarded_fraction = 0.0;  // 1 - selected_fraction
  bool empty = false;
};

/// Keeps isochromats whose transverse phase lies within +-half_width of
/// axis_phase (wrapped to [-pi, pi]) and renormalizes their weights.
/// Isochromats without a transverse component (below kPhaseFloor) have no
/// phase and are dropped, except that half_width = pi keeps everything.
/// An empty selection is reported through `empty`, never thrown.
/// Throws DomainError unless 0 < half_width <= pi.
SelectionResult select_phase_window(const Ensemble& ensemble, double axis_phase, double half_width);

// --- event sequences -------------------------------------------------------

struct RfPulse {
  Axis axis = Axis::x;
  double angle = 0.0;  // rad
};

struct Delay {
  double duration = 0.0;  // s
};

/// Selection pulse: isochromats inside the window are the kept group and
/// are left in place; everything else is tipped out of the transverse plane
/// and removed from the ensemble.
struct Select {
  double axis_phase = 0.0;
  double half_width = std::numbers::pi;
};

/// Records the net magnetization at this point without changing anything.
struct Acquire {
  std::string label;
};

using SequenceEvent = std::variant<RfPulse, Delay, Select, Acquire>;

struct TrajectorySample {
  double t = 0.0;
  Vec3 m = Vec3::Zero();
};

struct Acquisition {
  std::string label;
  double t = 0.0;
  Vec3 m = Vec3::Zero();
};

struct SamplingOptions {
  /// Maximum spacing of samples inside a delay; 0 samples event boundaries only.
  double sample_interval = 0.0;
  /// Gaussian jitter (standard deviation, s) added to each delay; clamped
  /// so durations stay >= 0. Drawn from `jitter_seed`.
  double timing_jitter = 0.0;
  std::uint64_t jitter_seed = 0;
};

struct SequenceOutcome {
  std::vector<TrajectorySample> trajectory;
  Ensemble final_ensemble;
  std::vector<double> selected_fractions;
  std::vector<Acquisition> acquisitions;
  bool emptied = false;
};

/// Throws ConfigError naming the offending event.
void validate_events(const std::vector<SequenceEvent>& events);

/// Validates, then executes events in order. The trajectory holds the
/// weighted net magnetization at t = 0, after every event and at every
/// sample point inside delays.
SequenceOutcome run_sequence(Ensemble ensemble, const std::vector<SequenceEvent>& events,
                             const SamplingOptions& sampling = {}, const Executor& exec = {});

}  // namespace mrqsim::bloch
