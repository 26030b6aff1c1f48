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

#include <cmath>
#include <numbers>
#include <random>

#include "mrqsim/errors.hpp"
#include "mrqsim/purification.hpp"
#include "oracles.hpp"

namespace mrqsim::bloch {
namespace {

constexpr double kPi = std::numbers::pi;

Ensemble single(double dw, double t1 = kInfinity, double t2 = kInfinity) {
  return Ensemble({Isochromat{{0, 0, 1}, dw, 1.0}}, t1, t2);
}

double wrap(double a) { return std::remainder(a, 2 * kPi); }

StimulatedEchoTiming timing(double a1, double a2, double a3, double a4) {
  return {a1, a2, a3, a4};
}

TEST(ValidateTiming, UnequalDephasingNamesConstraint) {
  try {
    validate_timing(timing(1e-3, 1e-3, 2e-3, 1e-3), {});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("t_a1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("t_a3"), std::string::npos);
  }
}

TEST(ValidateTiming, RejectsOtherBadInput) {
  StimulatedEchoOptions o;
  EXPECT_THROW(validate_timing(timing(-1, 0, -1, 0), o), ConfigError);
  o.repetitions = 0;
  EXPECT_THROW(validate_timing(timing(1, 0, 1, 0), o), ConfigError);
  o = {};
  o.window = 0.0;
  EXPECT_THROW(validate_timing(timing(1, 0, 1, 0), o), ConfigError);
  o.window = 3.5;
  EXPECT_THROW(validate_timing(timing(1, 0, 1, 0), o), ConfigError);
  EXPECT_THROW(modified_stimulated_echo(single(0.0), timing(1, 0, 2, 0)), ConfigError);
}

TEST(StimulatedEcho, FullWindowIsPureRotation) {
  for (Axis refocus : {Axis::x, Axis::y}) {
    StimulatedEchoOptions o;
    o.refocus_axis = refocus;
    const PurificationTrace tr = modified_stimulated_echo(single(0.0), timing(1e-3, 2e-3, 1e-3, 2e-3), o);
    EXPECT_EQ(tr.cumulative_factor, 1.0);
    ASSERT_EQ(tr.stage_fractions.size(), 1u);
    EXPECT_EQ(tr.stage_fractions[0], 1.0);
    const char c = refocus == Axis::x ? 'x' : 'y';
    oracle::BlochState ref{0, 0, 1};
    for (auto [axis, angle] : {std::pair{'x', kPi / 2}, {c, kPi}, {c, kPi}, {'x', kPi / 2}}) {
      ref = oracle::rodrigues(ref, axis, angle);
    }
    const Vec3 m = tr.final_ensemble.isochromats()[0].m;
    EXPECT_NEAR(m.x(), ref.x, 1e-12);
    EXPECT_NEAR(m.y(), ref.y, 1e-12);
    EXPECT_NEAR(m.z(), ref.z, 1e-12);
  }
}

TEST(StimulatedEcho, EchoSitsAtSelectionAxis) {
  const PurificationTrace tr = modified_stimulated_echo(single(0.0), timing(2e-3, 1e-3, 2e-3, 1e-3));
  ASSERT_EQ(tr.echo_phases.size(), 1u);
  EXPECT_NEAR(std::abs(tr.echo_phases[0]), kPi / 2, 1e-12);
  EXPECT_NEAR(tr.echo_amplitudes[0], 1.0, 1e-12);
  EXPECT_NEAR(tr.echo_times[0], 6e-3, 1e-15);
}

TEST(StimulatedEcho, ResidualCoefficient) {
  StimulatedEchoOptions o;
  EXPECT_NEAR(modified_stimulated_echo(single(0.0), timing(2e-3, 1e-3, 2e-3, 3e-3), o)
                  .residual_phase_coefficient,
              2e-3 - 1e-3 - 2e-3 + 3e-3, 1e-18);
  o.refocusing = false;
  EXPECT_NEAR(modified_stimulated_echo(single(0.0), timing(2e-3, 1e-3, 2e-3, 3e-3), o)
                  .residual_phase_coefficient,
              8e-3, 1e-18);
}

TEST(StimulatedEcho, UniformPhaseSelectionFraction) {
  // Dephasing of t_a1 - t_a2 with a spread of pi / 1 ms makes the phase at
  // the selection step uniform over the circle.
  EnsembleConfig c;
  c.size = 200000;
  c.off_resonance = kPi / 1e-3;
  c.seed = 17;
  StimulatedEchoOptions o;
  o.window = 0.3;
  const PurificationTrace tr =
      modified_stimulated_echo(make_ensemble(c), timing(2e-3, 1e-3, 2e-3, 1e-3), o);
  const double p = 0.3 / kPi;
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(c.size));
  EXPECT_NEAR(tr.stage_fractions[0], p, 4 * sigma);
  EXPECT_DOUBLE_EQ(tr.cumulative_factor, tr.stage_fractions[0]);
}

TEST(StimulatedEcho, CumulativeIsProductOfStages) {
  EnsembleConfig c;
  c.size = 50000;
  c.off_resonance = kPi / 1e-3;
  StimulatedEchoOptions o;
  o.window = 1.5;
  o.repetitions = 3;
  const PurificationTrace tr =
      modified_stimulated_echo(make_ensemble(c), timing(2e-3, 1e-3, 2e-3, 1e-3), o);
  ASSERT_EQ(tr.stage_fractions.size(), 3u);
  double prod = 1.0;
  for (double f : tr.stage_fractions) prod *= f;
  EXPECT_DOUBLE_EQ(tr.cumulative_factor, prod);
  EXPECT_EQ(tr.echo_times.size(), 3u);
  // Static off-resonance puts the same isochromats back in the window.
  EXPECT_EQ(tr.stage_fractions[1], 1.0);
  EXPECT_EQ(tr.stage_fractions[2], 1.0);
  // Stored magnetization alternates sign, and so does the echo phase.
  EXPECT_NEAR(tr.echo_phases[0], -tr.echo_phases[1], 1e-9);
}

TEST(StimulatedEcho, EmptySelectionIsReported) {
  StimulatedEchoOptions o;
  o.axis_phase = -kPi / 2;  // opposite the refocused group
  o.window = 0.1;
  const PurificationTrace tr = modified_stimulated_echo(single(0.0), timing(1e-3, 1e-3, 1e-3, 1e-3), o);
  EXPECT_TRUE(tr.empty);
  EXPECT_EQ(tr.cumulative_factor, 0.0);
}

TEST(Compensation, RefocusedPhaseUnchanged) {
  const std::vector<double> shifts{-400.0, -100.0, 0.0, 150.0, 500.0};
  const CompensationCheck ck =
      echo_compensation_check(single(0.0), timing(2e-3, 1e-3, 2e-3, 1e-3), {}, shifts);
  EXPECT_LE(ck.max_error_refocused, 1e-9);
  EXPECT_NEAR(ck.slope_plain, -6e-3, 1e-12);
  EXPECT_LE(ck.linearity_residual, 1e-12);
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    EXPECT_NEAR(ck.phase_error_plain[i], wrap(-shifts[i] * 6e-3), 1e-12);
  }
}

TEST(Compensation, UnequalRephasingLeavesScalarResidual) {
  // Scalar bookkeeping oracle: each 180 pulse negates the accrued phase.
  const auto t = timing(2e-3, 1e-3, 2e-3, 1.5e-3);
  const std::vector<double> shifts{-300.0, 0.0, 300.0};
  const CompensationCheck ck = echo_compensation_check(single(0.0), t, {}, shifts);
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    double phase = -shifts[i] * t.t_a1;
    phase = -phase;
    phase -= shifts[i] * (t.t_a2 + t.t_a3);
    phase = -phase;
    phase -= shifts[i] * t.t_a4;
    EXPECT_NEAR(ck.phase_error_refocused[i], wrap(phase), 1e-12);
  }
}

TEST(T1Hadamard, CoincidenceIsHalf) {
  const T1HadamardReport r = t1_recovery_hadamard(single(0.0, 1.5, 0.2), 10);
  EXPECT_NEAR(r.coincidence_time, 0.693 * 1.5, 1e-15);
  EXPECT_NEAR(r.mz_at_coincidence, 0.5, 1e-3);
  EXPECT_NEAR(r.mz_at_coincidence, -std::expm1(-0.693), 1e-15);
}

TEST(T1Hadamard, RejectsBadPreconditions) {
  EXPECT_THROW(t1_recovery_hadamard(single(0.0)), DomainError);
  Ensemble off({Isochromat{{1, 0, 0}, 0.0, 1.0}}, 1.0, 1.0);
  EXPECT_THROW(t1_recovery_hadamard(off), DomainError);
  EXPECT_THROW(t1_recovery_hadamard(Ensemble({}, 1.0, 1.0)), DomainError);
}

TEST(T1Hadamard, MatchesFineStepIntegrator) {
  const double t1 = 0.9, t2 = 0.3, dw = 40.0;
  const std::size_t samples = 100;
  const T1HadamardReport r = t1_recovery_hadamard(single(dw, t1, t2), samples);
  const double total = 0.693 * t1;
  oracle::BlochState ref = oracle::rodrigues({0, 0, 1}, 'y', kPi / 2);
  std::size_t checked = 0;
  double t = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    ref = oracle::rk4_free(ref, dw, t1, t2, total / samples, 1'000'000 / samples);
    t += total / samples;
    for (const auto& s : r.trajectory) {
      if (std::abs(s.t - t) < 1e-12) {
        EXPECT_NEAR(s.m.x(), ref.x, 1e-6);
        EXPECT_NEAR(s.m.y(), ref.y, 1e-6);
        EXPECT_NEAR(s.m.z(), ref.z, 1e-6);
        ++checked;
        break;
      }
    }
  }
  EXPECT_GE(checked, samples);
  EXPECT_NEAR(r.mz_at_coincidence, ref.z, 1e-6);
  ref = oracle::rodrigues(ref, 'y', kPi / 2);
  EXPECT_NEAR(r.final_m.x(), ref.x, 1e-6);
  EXPECT_NEAR(r.final_m.y(), ref.y, 1e-6);
  EXPECT_NEAR(r.final_m.z(), ref.z, 1e-6);
}

TEST(T1Hadamard, AlignmentIsCosineWithX) {
  const T1HadamardReport r = t1_recovery_hadamard(single(0.0, 1.0, 1.0));
  // Oracle: Ry(90) takes z to x; x decays to e^-0.693, z recovers; Ry(90) again.
  const double x = std::exp(-0.693), z = -std::expm1(-0.693);
  EXPECT_NEAR(r.final_m.x(), z, 1e-12);
  EXPECT_NEAR(r.final_m.z(), -x, 1e-12);
  EXPECT_NEAR(r.alignment_with_x, z / std::hypot(x, z), 1e-12);
}

// --- properties --------------------------------------------------------------

TEST(PurificationProperties, CompensationHoldsForRandomTimings) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> d(1e-4, 5e-3), u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = d(rng), b = d(rng);
    // Keep the plain-run phase inside (-pi, pi] so the fit sees no wraps.
    const double smax = 0.9 * kPi / (2 * (a + b));
    auto s = [&](std::mt19937_64& g) { return smax * u(g); };
    const std::vector<double> shifts{s(rng), s(rng), 0.0, s(rng), s(rng)};
    const CompensationCheck ck =
        echo_compensation_check(single(0.0), timing(a, b, a, b), {}, shifts);
    EXPECT_LE(ck.max_error_refocused, 1e-9);
    EXPECT_NEAR(ck.slope_plain, -2 * (a + b), 1e-9);
  }
}

}  // namespace
}  // namespace mrqsim::bloch
