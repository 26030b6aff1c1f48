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

// Static field model for gradient-defined qubit sites.
//
// A site sits on top of the main gradient G(z) and carries its own local
// reverse gradient G_n(z). Inside the site the field is
//
//   B_n(z) = B0 + G(z) - G_n(z)
//
// and the site's Larmor frequency is gamma * B_n(z_center). When G_n matches
// the slope of G over the site interval the field is flat and the site has a
// single resonance frequency.
//
// Units are SI: tesla, meter, radian/second. Hz values are provided for
// reporting only.

#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

namespace mrqsim::field {

/// 2*pi * 42.577 MHz/T, the 1H gyromagnetic ratio in rad/s/T.
inline constexpr double kProtonGamma = 2.0 * std::numbers::pi * 42.577e6;

/// Default relative homogeneity bound (spread / omega) for a qubit-grade site.
inline constexpr double kDefaultHomogeneityTolerance = 1e-9;

/// Piecewise-linear map z [m] -> field offset [T].
///
/// Each segment stores its own slope; outside the knot range the first and
/// last segments are extended. An empty map is identically zero.
class PiecewiseLinear {
 public:
  struct Knot {
    double z = 0.0;
    double value = 0.0;
  };

  PiecewiseLinear() = default;

  /// Knots must have strictly increasing z (throws ConfigError otherwise).
  /// A single knot yields a constant map.
  explicit PiecewiseLinear(std::vector<Knot> knots);

  /// value(z) = value_at_ref + slope * (z - z_ref), exactly.
  static PiecewiseLinear linear(double slope, double z_ref, double value_at_ref);
  static PiecewiseLinear constant(double value);

  double operator()(double z) const;

  /// The same map multiplied by c.
  PiecewiseLinear scaled(double c) const;

  const std::vector<Knot>& knots() const { return knots_; }
  const std::vector<double>& slopes() const { return slopes_; }

 private:
  std::vector<Knot> knots_;
  std::vector<double> slopes_;
};

struct QubitSite {
  int index = 0;  // label used in reports; lookup is by position
  double z_center = 0.0;
  double half_width = 0.0;
  PiecewiseLinear reverse_gradient;

  double z_min() const { return z_center - half_width; }
  double z_max() const { return z_center + half_width; }
  bool contains(double z) const { return z >= z_min() && z <= z_max(); }
};

struct MagnetSystem {
  double b0 = 0.0;
  double gamma = kProtonGamma;
  PiecewiseLinear main_gradient;
  std::vector<QubitSite> sites;
  double homogeneity_tolerance = kDefaultHomogeneityTolerance;

  /// Checks b0 > 0, gamma > 0, half_width > 0, strictly increasing centers
  /// and pairwise disjoint site intervals. Throws ConfigError.
  void validate() const;
};

/// omega = gamma * B. Any sign and magnitude is accepted.
inline double larmor(double gamma, double field) { return gamma * field; }

inline double to_hz(double angular) { return angular / (2.0 * std::numbers::pi); }

/// B0 + G(z) - G_site(z) for z inside the site interval.
/// Throws DomainError if z lies outside, std::out_of_range for a bad index.
double local_field(const MagnetSystem& system, std::size_t site_index, double z);

/// gamma * local_field(center).
double larmor_frequency(const MagnetSystem& system, std::size_t site_index);

struct SiteFieldRecord {
  int index = 0;
  double z_center = 0.0;
  double local_field = 0.0;         // T, at the site center
  double larmor_angular = 0.0;      // rad/s
  double larmor_hz = 0.0;
  double field_min = 0.0;           // T, over the sampled grid
  double field_max = 0.0;
  double spread_angular = 0.0;      // gamma * (max - min), rad/s
  double spread_hz = 0.0;
  double relative_spread = 0.0;     // spread / |omega|
  bool qubit_grade = false;         // relative_spread <= tolerance
  std::optional<double> separation_prev;  // |omega_n - omega_{n-1}|, rad/s
  std::optional<double> separation_next;  // |omega_n - omega_{n+1}|, rad/s
};

struct FieldReport {
  double b0 = 0.0;
  double gamma = 0.0;
  double homogeneity_tolerance = 0.0;
  std::size_t samples_per_site = 0;
  std::vector<SiteFieldRecord> sites;
};

/// Samples each site on a uniform grid of samples_per_site points spanning
/// [z_center - half_width, z_center + half_width].
/// Throws DomainError if samples_per_site < 2 and ConfigError for an invalid
/// system (including overlapping sites).
FieldReport field_report(const MagnetSystem& system, std::size_t samples_per_site);

void to_json(nlohmann::json& j, const SiteFieldRecord& r);
void to_json(nlohmann::json& j, const FieldReport& r);

}  // namespace mrqsim::field
