#pragma once

// JSON ingestion of SystemConfig with explicit unit tags, plus named rate
// overrides and the two built-in parameter sets.

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "levcs/system_model.hpp"

namespace levcs {

/// Accepted layouts:
///   {"particle": {...}, "tweezer": {...}, "num_particles": N, "cavity": {...}, "environment": {...}}
///   {"particles": [{"particle": {...}, "tweezer": {...}}, ...], "cavity": ..., "environment": ...}
/// Every dimensional field is {"value": x, "unit": "..."}.
SystemConfig system_config_from_json(const nlohmann::json& j);

/// Canonical form: explicit "particles" array, SI units.
nlohmann::json to_json(const SystemConfig& config);

nlohmann::json read_json_file(const std::filesystem::path& path);
SystemConfig load_system_config(const std::filesystem::path& path);

/// Named substitutions applied on top of the derived rates. Values are SI
/// (rad/s for rates). Particle-level entries apply to every particle.
struct RateOverrides {
  std::optional<double> linewidth;
  std::optional<double> detuning;
  std::optional<double> coupling;
  std::optional<double> omega;
  std::optional<double> damping;
  std::optional<double> bath_occupation;
  std::optional<double> initial_occupation;

  bool empty() const;
  bool operator==(const RateOverrides&) const = default;
};

/// Keys: linewidth, detuning, coupling, omega, damping (unit-tagged rates),
/// bath_occupation, initial_occupation (plain numbers). Unknown keys are rejected.
RateOverrides rate_overrides_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RateOverrides& o);

ModelRates apply_overrides(ModelRates rates, const RateOverrides& o);

/// Delic et al. experiment: stated mass 2.83 fg, pressure 1e-6 mbar.
SystemConfig experiment_config(std::size_t num_particles = 2);

/// Proposed design point: R = 90 nm, P = 347.5 mW, w0 = 0.61583 um,
/// pressure 1e-6 Pa, n0 = 0.1.
SystemConfig design_point_config(std::size_t num_particles = 2);

}  // namespace levcs
