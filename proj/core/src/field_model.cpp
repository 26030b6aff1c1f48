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

#include "mrqsim/field_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mrqsim/errors.hpp"

namespace mrqsim::field {

PiecewiseLinear::PiecewiseLinear(std::vector<Knot> knots) : knots_(std::move(knots)) {
  for (const auto& k : knots_) {
    if (!std::isfinite(k.z) || !std::isfinite(k.value)) {
      throw ConfigError("piecewise-linear map: non-finite knot");
    }
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i].z > knots_[i - 1].z)) {
      throw ConfigError("piecewise-linear map: knot z values must be strictly increasing");
    }
  }
  if (knots_.size() == 1) {
    slopes_.assign(1, 0.0);
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    slopes_.push_back((knots_[i].value - knots_[i - 1].value) / (knots_[i].z - knots_[i - 1].z));
  }
}

PiecewiseLinear PiecewiseLinear::linear(double slope, double z_ref, double value_at_ref) {
  if (!std::isfinite(slope) || !std::isfinite(z_ref) || !std::isfinite(value_at_ref)) {
    throw ConfigError("linear gradient: non-finite parameter");
  }
  PiecewiseLinear map;
  map.knots_ = {Knot{z_ref, value_at_ref}};
  map.slopes_ = {slope};
  return map;
}

PiecewiseLinear PiecewiseLinear::constant(double value) { return linear(0.0, 0.0, value); }

double PiecewiseLinear::operator()(double z) const {
  if (knots_.empty()) {
    return 0.0;
  }
  // Segment i spans [knots_[i], knots_[i+1]); z below the first knot uses
  // segment 0, z above the last uses the final segment.
  std::size_t seg = 0;
  if (knots_.size() > 1) {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), z,
                               [](double v, const Knot& k) { return v < k.z; });
    std::size_t upper = static_cast<std::size_t>(it - knots_.begin());
    seg = upper == 0 ? 0 : std::min(upper - 1, slopes_.size() - 1);
  }
  const Knot& base = knots_[seg];
  return base.value + (z - base.z) * slopes_[seg];
}

PiecewiseLinear PiecewiseLinear::scaled(double c) const {
  PiecewiseLinear out = *this;
  for (auto& k : out.knots_) k.value *= c;
  for (auto& s : out.slopes_) s *= c;
  return out;
}

void MagnetSystem::validate() const {
  if (!(b0 > 0.0) || !std::isfinite(b0)) {
    throw ConfigError("magnet: b0 must be positive and finite");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("magnet: gamma must be positive and finite");
  }
  if (!(homogeneity_tolerance >= 0.0)) {
    throw ConfigError("magnet: homogeneity tolerance must be non-negative");
  }
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& s = sites[i];
    if (!(s.half_width > 0.0) || !std::isfinite(s.half_width) || !std::isfinite(s.z_center)) {
      std::ostringstream msg;
      msg << "magnet: site " << s.index << " needs a positive finite half_width";
      throw ConfigError(msg.str());
    }
    if (i > 0) {
      const auto& prev = sites[i - 1];
      if (!(s.z_center > prev.z_center)) {
        std::ostringstream msg;
        msg << "magnet: site centers must be strictly increasing (site " << prev.index
            << " then " << s.index << ")";
        throw ConfigError(msg.str());
      }
      if (!(s.z_min() > prev.z_max())) {
        std::ostringstream msg;
        msg << "magnet: sites " << prev.index << " and " << s.index << " overlap";
        throw ConfigError(msg.str());
      }
    }
  }
}

double local_field(const MagnetSystem& system, std::size_t site_index, double z) {
  const QubitSite& site = system.sites.at(site_index);
  if (!site.contains(z)) {
    std::ostringstream msg;
    msg << "local_field: z = " << z << " m is outside site " << site.index << " ["
        << site.z_min() << ", " << site.z_max() << "]";
    throw DomainError(msg.str());
  }
  // Grouped so that identical main and reverse maps cancel exactly.
  return system.b0 + (system.main_gradient(z) - site.reverse_gradient(z));
}

double larmor_frequency(const MagnetSystem& system, std::size_t site_index) {
  const QubitSite& site = system.sites.at(site_index);
  return larmor(system.gamma, local_field(system, site_index, site.z_center));
}

FieldReport field_report(const MagnetSystem& system, std::size_t samples_per_site) {
  if (samples_per_site < 2) {
    throw DomainError("field_report: samples_per_site must be >= 2");
  }
  system.validate();

  FieldReport report;
  report.b0 = system.b0;
  report.gamma = system.gamma;
  report.homogeneity_tolerance = system.homogeneity_tolerance;
  report.samples_per_site = samples_per_site;
  report.sites.reserve(system.sites.size());

  for (std::size_t i = 0; i < system.sites.size(); ++i) {
    const QubitSite& site = system.sites[i];
    SiteFieldRecord rec;
    rec.index = site.index;
    rec.z_center = site.z_center;
    rec.local_field = local_field(system, i, site.z_center);
    rec.larmor_angular = larmor(system.gamma, rec.local_field);
    rec.larmor_hz = to_hz(rec.larmor_angular);

    double lo = rec.local_field;
    double hi = rec.local_field;
    for (std::size_t k = 0; k < samples_per_site; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(samples_per_site - 1);
      const double b = local_field(system, i, std::lerp(site.z_min(), site.z_max(), t));
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
    rec.field_min = lo;
    rec.field_max = hi;
    rec.spread_angular = system.gamma * (hi - lo);
    rec.spread_hz = to_hz(rec.spread_angular);
    rec.relative_spread =
        rec.larmor_angular != 0.0 ? rec.spread_angular / std::abs(rec.larmor_angular) : 0.0;
    rec.qubit_grade = rec.relative_spread <= system.homogeneity_tolerance;
    report.sites.push_back(rec);
  }

  for (std::size_t i = 0; i < report.sites.size(); ++i) {
    if (i > 0) {
      report.sites[i].separation_prev =
          std::abs(report.sites[i].larmor_angular - report.sites[i - 1].larmor_angular);
    }
    if (i + 1 < report.sites.size()) {
      report.sites[i].separation_next =
          std::abs(report.sites[i].larmor_angular - report.sites[i + 1].larmor_angular);
    }
  }
  return report;
}

void to_json(nlohmann::json& j, const SiteFieldRecord& r) {
  j = nlohmann::json{
      {"index", r.index},
      {"z_center_m", r.z_center},
      {"local_field_T", r.local_field},
      {"larmor_rad_per_s", r.larmor_angular},
      {"larmor_Hz", r.larmor_hz},
      {"field_min_T", r.field_min},
      {"field_max_T", r.field_max},
      {"frequency_spread_rad_per_s", r.spread_angular},
      {"frequency_spread_Hz", r.spread_hz},
      {"relative_spread", r.relative_spread},
      {"qubit_grade", r.qubit_grade},
  };
  j["neighbor_separation_prev_rad_per_s"] =
      r.separation_prev ? nlohmann::json(*r.separation_prev) : nlohmann::json(nullptr);
  j["neighbor_separation_next_rad_per_s"] =
      r.separation_next ? nlohmann::json(*r.separation_next) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json& j, const FieldReport& r) {
  j = nlohmann::json{
      {"b0_T", r.b0},
      {"gamma_rad_per_s_per_T", r.gamma},
      {"homogeneity_tolerance", r.homogeneity_tolerance},
      {"samples_per_site", r.samples_per_site},
      {"sites", r.sites},
  };
}

}  // namespace mrqsim::field
