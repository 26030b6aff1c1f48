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

#include "mrqsim/cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "mrqsim/circuit_text.hpp"
#include "mrqsim/errors.hpp"

namespace mrqsim::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::string type_name(const json& j) { return j.type_name(); }

// Typed access to one JSON object with unknown-key rejection.
class Reader {
 public:
  Reader(const json& j, std::string path, std::initializer_list<std::string_view> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object, got " + type_name(j_));
    for (const auto& [key, _] : j_.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        std::string list;
        for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        fail(at(key), "unknown key (allowed: " + list + ")");
      }
    }
  }

  std::string at(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }
  bool has(std::string_view key) const { return j_.contains(std::string(key)); }
  const json& raw(std::string_view key) const { return j_.at(std::string(key)); }

  double number(std::string_view key, std::optional<double> fallback = std::nullopt,
                bool allow_inf = false) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      fail(at(key), "required key is missing");
    }
    const json& v = raw(key);
    if (allow_inf && v.is_string() && v.get<std::string>() == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    if (!v.is_number()) {
      fail(at(key), std::string("expected a number") + (allow_inf ? " or \"inf\"" : "") +
                        ", got " + type_name(v));
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(at(key), "must be finite");
    return d;
  }

  double positive(std::string_view key, std::optional<double> fallback = std::nullopt,
                  bool allow_inf = false) const {
    const double d = number(key, fallback, allow_inf);
    if (!(d > 0.0)) fail(at(key), "must be > 0");
    return d;
  }

  double non_negative(std::string_view key, std::optional<double> fallback = std::nullopt) const {
    const double d = number(key, fallback);
    if (!(d >= 0.0)) fail(at(key), "must be >= 0");
    return d;
  }

  std::uint64_t u64(std::string_view key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(at(key), "expected a non-negative integer, got " + type_name(v));
    }
    return v.get<std::uint64_t>();
  }

  std::string string(std::string_view key, std::string fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) fail(at(key), "expected a string, got " + type_name(v));
    return v.get<std::string>();
  }

  bool boolean(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false, got " + type_name(v));
    return v.get<bool>();
  }

 private:
  const json& j_;
  std::string path_;
};

// Converts a ConfigError/DomainError raised by a core constructor into one
// carrying the key path.
template <typename Fn>
auto with_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    fail(path, e.what());
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

field::PiecewiseLinear parse_gradient(const json& j, const std::string& path) {
  if (j.is_object() && j.contains("points")) {
    Reader r(j, path, {"points"});
    const json& pts = r.raw("points");
    if (!pts.is_array() || pts.empty()) fail(r.at("points"), "expected a non-empty array");
    std::vector<field::PiecewiseLinear::Knot> knots;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Reader p(pts[i], r.at("points") + "[" + std::to_string(i) + "]", {"z_m", "offset_T"});
      knots.push_back({p.number("z_m"), p.number("offset_T")});
    }
    return with_path(r.at("points"), [&] { return field::PiecewiseLinear(std::move(knots)); });
  }
  Reader r(j, path, {"slope_T_per_m", "z_ref_m", "offset_T"});
  return field::PiecewiseLinear::linear(r.number("slope_T_per_m"), r.number("z_ref_m", 0.0),
                                        r.number("offset_T", 0.0));
}

MagnetSection parse_magnet(const json& j) {
  Reader r(j, "magnet",
           {"b0_T", "gamma_rad_per_s_per_T", "homogeneity_tolerance", "samples_per_site",
            "main_gradient", "sites"});
  MagnetSection m;
  m.system.b0 = r.positive("b0_T");
  m.system.gamma = r.positive("gamma_rad_per_s_per_T", field::kProtonGamma);
  m.system.homogeneity_tolerance =
      r.non_negative("homogeneity_tolerance", field::kDefaultHomogeneityTolerance);
  m.samples_per_site = r.u64("samples_per_site", 101);
  if (m.samples_per_site < 2) fail(r.at("samples_per_site"), "must be >= 2");
  if (r.has("main_gradient")) {
    m.system.main_gradient = parse_gradient(r.raw("main_gradient"), r.at("main_gradient"));
  }
  if (!r.has("sites")) fail(r.at("sites"), "required key is missing");
  const json& sites = r.raw("sites");
  if (!sites.is_array() || sites.empty()) fail(r.at("sites"), "expected a non-empty array");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const std::string p = r.at("sites") + "[" + std::to_string(i) + "]";
    Reader s(sites[i], p, {"index", "z_center_m", "half_width_m", "reverse_gradient"});
    field::QubitSite site;
    site.index = static_cast<int>(s.u64("index", i));
    site.z_center = s.number("z_center_m");
    site.half_width = s.positive("half_width_m");
    if (s.has("reverse_gradient")) {
      site.reverse_gradient = parse_gradient(s.raw("reverse_gradient"), s.at("reverse_gradient"));
    }
    m.system.sites.push_back(std::move(site));
  }
  with_path("magnet", [&] {
    m.system.validate();
    return 0;
  });
  return m;
}

EnsembleSection parse_ensemble(const json& j) {
  Reader r(j, "ensemble",
           {"size", "t1_s", "t2_s", "off_resonance_rad_per_s", "distribution", "seed",
            "population"});
  EnsembleSection e;
  e.config.size = r.u64("size", e.config.size);
  if (e.config.size == 0) fail(r.at("size"), "must be >= 1");
  if (e.config.size > 50'000'000) fail(r.at("size"), "must be <= 50000000");
  e.config.t1 = r.positive("t1_s", bloch::kInfinity, true);
  e.config.t2 = r.positive("t2_s", bloch::kInfinity, true);
  e.config.off_resonance = r.non_negative("off_resonance_rad_per_s", 0.0);
  const std::string dist = r.string("distribution", "uniform");
  if (dist == "uniform") {
    e.config.distribution = bloch::OffResonanceDistribution::uniform;
  } else if (dist == "gaussian") {
    e.config.distribution = bloch::OffResonanceDistribution::gaussian;
  } else {
    fail(r.at("distribution"), "expected \"uniform\" or \"gaussian\"");
  }
  e.config.seed = r.u64("seed", e.config.seed);
  if (r.has("population")) {
    Reader p(r.raw("population"), r.at("population"), {"n_total", "temperature_K", "b0_T"});
    PopulationSection pop;
    pop.n_total = p.positive("n_total", pop.n_total);
    pop.temperature_kelvin = p.positive("temperature_K", pop.temperature_kelvin);
    if (p.has("b0_T")) pop.b0 = p.positive("b0_T");
    e.population = pop;
  }
  return e;
}

spin::Axis parse_axis_at(const std::string& text, const std::string& path) {
  return with_path(path, [&] { return spin::parse_axis(text); });
}

EchoSection parse_echo(const json& j, const std::string& path) {
  Reader r(j, path,
           {"t_a1_s", "t_a2_s", "t_a3_s", "t_a4_s", "window_half_width_rad", "axis_phase_rad",
            "refocusing", "refocus_axis", "repetitions", "compensation_shifts_rad_per_s",
            "purify_steps", "purify_factor", "epsilon0"});
  EchoSection e;
  e.timing.t_a1 = r.non_negative("t_a1_s");
  e.timing.t_a2 = r.non_negative("t_a2_s");
  e.timing.t_a3 = r.non_negative("t_a3_s");
  e.timing.t_a4 = r.non_negative("t_a4_s");
  e.options.window = r.positive("window_half_width_rad", e.options.window);
  e.options.axis_phase = r.number("axis_phase_rad", e.options.axis_phase);
  e.options.refocusing = r.boolean("refocusing", true);
  e.options.refocus_axis = parse_axis_at(r.string("refocus_axis", "x"), r.at("refocus_axis"));
  e.options.repetitions = static_cast<int>(r.u64("repetitions", 1));
  if (r.has("compensation_shifts_rad_per_s")) {
    const json& s = r.raw("compensation_shifts_rad_per_s");
    if (!s.is_array() || s.size() < 2) fail(r.at("compensation_shifts_rad_per_s"), "expected >= 2 numbers");
    e.compensation_shifts.clear();
    for (const auto& v : s) {
      if (!v.is_number()) fail(r.at("compensation_shifts_rad_per_s"), "expected numbers");
      e.compensation_shifts.push_back(v.get<double>());
    }
  }
  e.purify_steps = static_cast<int>(r.u64("purify_steps", 3));
  e.purify_factor = r.positive("purify_factor", e.purify_factor);
  if (e.purify_factor > 1.0) fail(r.at("purify_factor"), "must lie in (0, 1]");
  e.epsilon0 = r.non_negative("epsilon0", 0.0);
  if (e.epsilon0 > 1.0) fail(r.at("epsilon0"), "must lie in [0, 1]");
  with_path(path, [&] {
    bloch::validate_timing(e.timing, e.options);
    return 0;
  });
  return e;
}

void parse_sequence(const json& j, Scenario& s) {
  Reader r(j, "sequence", {"gate", "stimulated_echo", "bell", "t1had"});
  if (r.has("gate")) {
    Reader g(r.raw("gate"), r.at("gate"), {"epsilon", "pure_state"});
    s.gate.epsilon = g.non_negative("epsilon", s.gate.epsilon);
    if (s.gate.epsilon > 1.0) fail(g.at("epsilon"), "must lie in [0, 1]");
    s.gate.pure_state_bits = g.string("pure_state", s.gate.pure_state_bits);
    with_path(g.at("pure_state"), [&] { return spin::StateVector::from_bits(s.gate.pure_state_bits); });
  }
  if (r.has("stimulated_echo")) s.echo = parse_echo(r.raw("stimulated_echo"), r.at("stimulated_echo"));
  if (r.has("bell")) {
    Reader b(r.raw("bell"), r.at("bell"), {"program"});
    s.bell.program_text = b.string("program", s.bell.program_text);
  }
  if (r.has("t1had")) {
    Reader t(r.raw("t1had"), r.at("t1had"), {"samples"});
    s.t1had.samples = t.u64("samples", s.t1had.samples);
    if (s.t1had.samples > 10'000'000) fail(t.at("samples"), "must be <= 10000000");
  }
}

OutputSection parse_output(const json& j) {
  Reader r(j, "output", {"sample_interval_s", "timing_jitter_s", "jitter_seed", "trajectory_csv"});
  OutputSection o;
  o.sample_interval = r.non_negative("sample_interval_s", 0.0);
  o.timing_jitter = r.non_negative("timing_jitter_s", 0.0);
  if (r.has("jitter_seed")) o.jitter_seed = r.u64("jitter_seed", 0);
  o.trajectory_csv = r.boolean("trajectory_csv", true);
  return o;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  Reader r(doc, "", {"schema", "seed", "magnet", "ensemble", "sequence", "output"});
  if (r.has("schema") && r.string("schema", "") != kScenarioSchema) {
    fail("schema", "expected \"" + std::string(kScenarioSchema) + "\"");
  }
  Scenario s;
  if (r.has("seed")) s.seed = r.u64("seed", 0);
  if (r.has("magnet")) s.magnet = parse_magnet(r.raw("magnet"));
  if (r.has("ensemble")) s.ensemble = parse_ensemble(r.raw("ensemble"));
  if (r.has("sequence")) parse_sequence(r.raw("sequence"), s);
  if (r.has("output")) s.output = parse_output(r.raw("output"));
  s.bell.program = with_path("sequence.bell.program",
                             [&] { return pulse::parse_circuit(s.bell.program_text); });
  return s;
}

Scenario load_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << "scenario line " << line << ", column " << col << ": invalid JSON";
    throw ConfigError(msg.str());
  }
  return parse_scenario(doc);
}

}  // namespace mrqsim::cli
