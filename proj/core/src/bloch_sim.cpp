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

#include "mrqsim/bloch_sim.hpp"

#include <algorithm>
#include <sstream>

#include "mrqsim/errors.hpp"
#include "rng.hpp"

namespace mrqsim::bloch {

namespace {

constexpr double kReducedPlanck = 1.054571817e-34;  // J s
constexpr double kBoltzmann = 1.380649e-23;         // J/K

double weight_sum(const std::vector<Isochromat>& isos) {
  std::vector<double> w(isos.size());
  std::transform(isos.begin(), isos.end(), w.begin(), [](const Isochromat& i) { return i.weight; });
  return pairwise_sum(std::span<const double>(w), 0.0);
}

template <typename... Fs>
struct Visitor : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
Visitor(Fs...) -> Visitor<Fs...>;

}  // namespace

void PopulationSummary::validate() const {
  const double counts[] = {n_total, n_low, n_high, selected_x, selected_y};
  for (double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw ConfigError("population: counts must be finite and non-negative");
    }
  }
  if (n_low + n_high > n_total * (1.0 + 1e-12)) {
    throw ConfigError("population: n_low + n_high exceeds n_total");
  }
  if (n_low < n_high) {
    throw ConfigError("population: n_low must be >= n_high for a positive field");
  }
}

PopulationSummary thermal_population(double n_total, double b0, double gamma,
                                     double temperature_kelvin) {
  if (!(n_total >= 0.0) || !(b0 >= 0.0) || !(gamma > 0.0) || !(temperature_kelvin > 0.0)) {
    throw DomainError("thermal_population: need n_total >= 0, b0 >= 0, gamma > 0, T > 0");
  }
  const double x = kReducedPlanck * gamma * b0 / (kBoltzmann * temperature_kelvin);
  const double p = std::tanh(x / 2.0);
  PopulationSummary pop;
  pop.n_total = n_total;
  pop.n_low = n_total * (1.0 + p) / 2.0;
  pop.n_high = n_total * (1.0 - p) / 2.0;
  return pop;
}

// --- Ensemble --------------------------------------------------------------

Ensemble::Ensemble(std::vector<Isochromat> isochromats, double t1, double t2,
                   PopulationSummary population)
    : isochromats_(std::move(isochromats)), t1_(t1), t2_(t2), population_(population) {
  if (!(t1_ > 0.0)) throw ConfigError("ensemble: T1 must be > 0");
  if (!(t2_ > 0.0)) throw ConfigError("ensemble: T2 must be > 0");
  for (const auto& iso : isochromats_) {
    if (!(iso.weight >= 0.0) || !std::isfinite(iso.delta_omega) || !iso.m.allFinite()) {
      throw ConfigError("ensemble: isochromat with negative weight or non-finite state");
    }
  }
  if (!isochromats_.empty()) {
    const double total = weight_sum(isochromats_);
    if (!(std::abs(total - 1.0) <= 1e-12)) {
      std::ostringstream msg;
      msg << "ensemble: weights sum to " << total << ", expected 1";
      throw ConfigError(msg.str());
    }
  }
  population_.validate();
}

std::vector<std::string> Ensemble::warnings() const {
  std::vector<std::string> out;
  if (t2_ > t1_) {
    out.emplace_back("T2 exceeds T1, which is unphysical for a simple spin-1/2 system");
  }
  return out;
}

Vec3 Ensemble::net_magnetization() const {
  std::vector<Vec3> weighted(isochromats_.size());
  for (std::size_t i = 0; i < isochromats_.size(); ++i) {
    weighted[i] = isochromats_[i].weight * isochromats_[i].m;
  }
  return pairwise_sum(std::span<const Vec3>(weighted), Vec3(Vec3::Zero()));
}

Ensemble make_ensemble(const EnsembleConfig& config) {
  if (config.size == 0) throw ConfigError("ensemble: size must be >= 1");
  if (!(config.off_resonance >= 0.0) || !std::isfinite(config.off_resonance)) {
    throw ConfigError("ensemble: off-resonance spread must be finite and >= 0");
  }
  detail::PortableRng rng(config.seed);
  const double w = 1.0 / static_cast<double>(config.size);
  std::vector<Isochromat> isos(config.size);
  for (auto& iso : isos) {
    iso.weight = w;
    switch (config.distribution) {
      case OffResonanceDistribution::uniform:
        iso.delta_omega = config.off_resonance * (2.0 * rng.uniform() - 1.0);
        break;
      case OffResonanceDistribution::gaussian:
        iso.delta_omega = config.off_resonance * rng.normal();
        break;
    }
  }
  return Ensemble(std::move(isos), config.t1, config.t2, config.population);
}

// --- elementary operations -------------------------------------------------

Mat3 rotation_matrix(Axis axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r;
  switch (axis) {
    case Axis::x:
      r << 1, 0, 0, 0, c, -s, 0, s, c;
      break;
    case Axis::y:
      r << c, 0, s, 0, 1, 0, -s, 0, c;
      break;
    case Axis::z:
      r << c, -s, 0, s, c, 0, 0, 0, 1;
      break;
  }
  return r;
}

Ensemble apply_pulse(Ensemble ensemble, Axis axis, double angle, const Executor& exec) {
  if (!std::isfinite(angle)) throw DomainError("apply_pulse: angle must be finite");
  const Mat3 r = rotation_matrix(axis, angle);
  auto& isos = ensemble.isochromats();
  parallel_for(isos.size(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) isos[i].m = r * isos[i].m;
  });
  return ensemble;
}

Ensemble free_evolve(Ensemble ensemble, double duration, const Executor& exec) {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw DomainError("free_evolve: duration must be finite and >= 0");
  }
  if (duration == 0.0) return ensemble;
  const double e2 = std::exp(-duration / ensemble.t2());
  // Mz + (1 - Mz)(1 - E1), with 1 - E1 from expm1 so that T1 = inf leaves
  // Mz bit-identical and Mz = 1 stays fixed.
  const double recovery = -std::expm1(-duration / ensemble.t1());
  auto& isos = ensemble.isochromats();
  parallel_for(isos.size(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Vec3& m = isos[i].m;
      const double phi = -isos[i].delta_omega * duration;
      const double c = std::cos(phi);
      const double s = std::sin(phi);
      const double x = m.x() * c - m.y() * s;
      const double y = m.x() * s + m.y() * c;
      m.x() = x * e2;
      m.y() = y * e2;
      m.z() = m.z() + (1.0 - m.z()) * recovery;
    }
  });
  return ensemble;
}

SpinEchoResult spin_echo(Ensemble ensemble, double tau, const Executor& exec) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw DomainError("spin_echo: tau must be finite and >= 0");
  }
  SpinEchoResult out;
  out.initial_amplitude = ensemble.net_magnetization().head<2>().norm();
  ensemble = free_evolve(std::move(ensemble), tau, exec);
  ensemble = apply_pulse(std::move(ensemble), Axis::x, std::numbers::pi, exec);
  ensemble = free_evolve(std::move(ensemble), tau, exec);
  out.echo_amplitude = ensemble.net_magnetization().head<2>().norm();
  out.ensemble = std::move(ensemble);
  return out;
}

SelectionResult select_phase_window(const Ensemble& ensemble, double axis_phase,
                                    double half_width) {
  if (!(half_width > 0.0 && half_width <= std::numbers::pi)) {
    throw DomainError("select_phase_window: half_width must lie in (0, pi]");
  }
  if (!std::isfinite(axis_phase)) {
    throw DomainError("select_phase_window: axis_phase must be finite");
  }

  SelectionResult out;
  const auto& isos = ensemble.isochromats();
  if (isos.empty()) {
    out.ensemble = ensemble;
    out.empty = true;
    out.discarded_fraction = 1.0;
    return out;
  }

  std::vector<Isochromat> kept;
  if (half_width >= std::numbers::pi) {
    kept = isos;
  } else {
    for (const auto& iso : isos) {
      if (iso.transverse() <= kPhaseFloor) continue;
      const double d = std::remainder(iso.phase() - axis_phase, 2.0 * std::numbers::pi);
      if (std::abs(d) <= half_width) kept.push_back(iso);
    }
  }

  const double total = weight_sum(isos);
  const double kept_weight = weight_sum(kept);
  out.selected_fraction = total > 0.0 ? kept_weight / total : 0.0;
  out.discarded_fraction = 1.0 - out.selected_fraction;

  if (kept.empty() || !(kept_weight > 0.0)) {
    out.empty = true;
    out.ensemble = Ensemble({}, ensemble.t1(), ensemble.t2(), ensemble.population());
    return out;
  }
  for (auto& iso : kept) iso.weight /= kept_weight;
  out.ensemble = Ensemble(std::move(kept), ensemble.t1(), ensemble.t2(), ensemble.population());
  return out;
}

// --- sequences -------------------------------------------------------------

void validate_events(const std::vector<SequenceEvent>& events) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    auto fail = [i](const std::string& what) {
      std::ostringstream msg;
      msg << "sequence event " << i << ": " << what;
      throw ConfigError(msg.str());
    };
    std::visit(
        Visitor{[&](const RfPulse& p) {
                  if (!std::isfinite(p.angle)) fail("pulse angle must be finite");
                },
                [&](const Delay& d) {
                  if (!(d.duration >= 0.0) || !std::isfinite(d.duration)) {
                    fail("delay duration must be finite and >= 0");
                  }
                },
                [&](const Select& s) {
                  if (!std::isfinite(s.axis_phase)) fail("select axis_phase must be finite");
                  if (!(s.half_width > 0.0 && s.half_width <= std::numbers::pi)) {
                    fail("select half_width must lie in (0, pi]");
                  }
                },
                [&](const Acquire&) {}},
        events[i]);
  }
}

SequenceOutcome run_sequence(Ensemble ensemble, const std::vector<SequenceEvent>& events,
                             const SamplingOptions& sampling, const Executor& exec) {
  validate_events(events);
  if (!(sampling.sample_interval >= 0.0) || !std::isfinite(sampling.sample_interval)) {
    throw ConfigError("sampling: sample_interval must be finite and >= 0");
  }
  if (!(sampling.timing_jitter >= 0.0) || !std::isfinite(sampling.timing_jitter)) {
    throw ConfigError("sampling: timing_jitter must be finite and >= 0");
  }

  SequenceOutcome out;
  detail::PortableRng jitter(sampling.jitter_seed);
  double t = 0.0;
  auto sample = [&] { out.trajectory.push_back({t, ensemble.net_magnetization()}); };
  sample();

  for (const auto& event : events) {
    std::visit(
        Visitor{
            [&](const RfPulse& p) {
              ensemble = apply_pulse(std::move(ensemble), p.axis, p.angle, exec);
              sample();
            },
            [&](const Delay& d) {
              double duration = d.duration;
              if (sampling.timing_jitter > 0.0) {
                duration = std::max(0.0, duration + sampling.timing_jitter * jitter.normal());
              }
              std::size_t steps = 1;
              if (sampling.sample_interval > 0.0 && duration > sampling.sample_interval) {
                steps = static_cast<std::size_t>(std::ceil(duration / sampling.sample_interval));
              }
              const double dt = duration / static_cast<double>(steps);
              for (std::size_t k = 0; k < steps; ++k) {
                ensemble = free_evolve(std::move(ensemble), dt, exec);
                t += dt;
                sample();
              }
            },
            [&](const Select& s) {
              SelectionResult sel = select_phase_window(ensemble, s.axis_phase, s.half_width);
              out.selected_fractions.push_back(sel.selected_fraction);
              out.emptied = out.emptied || sel.empty;
              ensemble = std::move(sel.ensemble);
              sample();
            },
            [&](const Acquire& a) {
              out.acquisitions.push_back({a.label, t, ensemble.net_magnetization()});
            }},
        event);
  }
  out.final_ensemble = std::move(ensemble);
  return out;
}

}  // namespace mrqsim::bloch
