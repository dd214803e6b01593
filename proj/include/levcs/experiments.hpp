#pragma once

// Scenario runner and sweeps: unitary dynamics, particle-number dilution,
// open dynamics, initial-occupation and coupling sweeps, squeezing/Wigner
// snapshots and the (R, P_t) design map.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "levcs/config.hpp"
#include "levcs/trajectory.hpp"

namespace levcs {

inline constexpr double kDefaultDt = 1e-9;
inline constexpr double kDilutionWindow = 4e-6;
inline constexpr double kUnitaryWindow = 20e-6;

struct ScenarioSpec {
  SystemConfig config;
  RateOverrides overrides;
  double t_final = 20e-6;
  double dt = kDefaultDt;
  std::size_t store_every = 1;
  UnphysicalPolicy on_unphysical = UnphysicalPolicy::Abort;
};

/// Reads the optional "scenario" section of a config document:
/// {"t_final": q, "dt": q, "store_every": n, "overrides": {...}}.
ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioSpec& spec);

ModelRates scenario_rates(const ScenarioSpec& spec);
Trajectory run_scenario(const ScenarioSpec& spec, Execution exec = Execution::Parallel);

/// Largest whole number of dt steps that fits in `window`, times dt.
double window_end(double window, double dt);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

bool all_passed(const std::vector<Check>& checks);
nlohmann::json to_json(const std::vector<Check>& checks);

/// Complete zero -> positive -> zero excursions of a series, with "positive"
/// meaning > threshold.
std::size_t count_birth_death_cycles(const std::vector<double>& series, double threshold);

// --- unitary dynamics --------------------------------------------------------

struct UnitaryResult {
  Trajectory trajectory;
  double max_purity_deviation = 0.0;   // max_k |nu_k - 1| over all samples
  double max_entropy_asymmetry = 0.0;  // max |S(mode) - S(rest)| over modes and samples
  std::size_t particle_cycles = 0;     // birth-death cycles of LN(1,2)
  std::vector<Check> checks;
};

/// Forces kappa = gamma = 0 and a vacuum start.
UnitaryResult run_unitary_demo(ScenarioSpec spec, Execution exec = Execution::Parallel);

// --- particle-number sweep ---------------------------------------------------

struct DilutionEntry {
  std::size_t num_particles = 0;
  Trajectory trajectory;
  double max_particle_ln = 0.0;   // max over t and particle pairs
  double pair_asymmetry = 0.0;    // max over t of spread of LN across particle pairs
  StabilityReport stability;
};

/// Identical copies of particle 1, ground-state starts, window [0, 4 us].
std::vector<DilutionEntry> run_particle_number_sweep(const ScenarioSpec& base,
                                                     const std::vector<std::size_t>& counts,
                                                     Execution exec = Execution::Parallel);

// --- open dynamics -----------------------------------------------------------

struct OpenDynamicsResult {
  Trajectory trajectory;
  double max_particle_ln = 0.0;
  std::optional<double> particle_ln_onset;   // first t with LN(1,2) > threshold
  std::optional<double> particle_ln_death;   // first t after onset with LN(1,2) <= threshold
  std::optional<double> information_onset;   // first t with I_particles > threshold
  std::vector<Check> checks;
};

OpenDynamicsResult run_open_dynamics(const ScenarioSpec& spec, Execution exec = Execution::Parallel);

// --- sweeps over initial occupation and coupling ------------------------------

/// Max over t in [0, window] of LN(1, 2), with a per-sample series.
struct PairSeries {
  std::vector<double> times;
  std::vector<double> ln;       // evaluated samples only
  std::size_t requested_samples = 0;
  bool truncated = false;
  std::string diagnostic;
  double max_ln = 0.0;
  /// Samples with LN > threshold over requested samples; truncated samples count as not positive.
  double positive_fraction = 0.0;
};

PairSeries particle_pair_series(const LinearDynamics& dyn, const GaussianState& s0, const EvolveOptions& opts);

struct OccupationPoint {
  double n1 = 0.0;
  double n2 = 0.0;
  double max_ln = 0.0;
};

struct TemperatureSweepResult {
  double window = 0.0;  // coherence time of particle 1
  std::vector<OccupationPoint> diagonal;
  std::vector<OccupationPoint> grid;  // row-major over (n1, n2)
  std::optional<double> threshold;    // smallest diagonal n0 with max LN < threshold
};

TemperatureSweepResult run_temperature_sweep(const ScenarioSpec& base, const std::vector<double>& diagonal,
                                             const std::vector<double>& grid_axis,
                                             Execution exec = Execution::Parallel);

struct CouplingRow {
  double ratio = 0.0;  // g / omega
  double coupling = 0.0;
  bool stable = false;
  PairSeries series;
};

struct CouplingSweepResult {
  double window = 0.0;
  double omega = 0.0;
  double base_ratio = 0.0;  // derived g / omega; this row is always present
  std::vector<CouplingRow> rows;  // sorted by ratio
};

/// Rows for each ratio plus the derived base ratio. Detuning stays fixed.
/// Unphysical blow-ups of unstable rows truncate the row instead of failing.
CouplingSweepResult run_coupling_sweep(const ScenarioSpec& base, const std::vector<double>& ratios,
                                       Execution exec = Execution::Parallel);

/// Base row vs an open-dynamics run over the same window (1e-9), zero LN for
/// g/omega <= 0.2, and, when a row with g/omega >= 1 exists, a larger
/// LN-positive fraction there than on the base row.
std::vector<Check> coupling_sweep_checks(const CouplingSweepResult& r, const ScenarioSpec& base,
                                         Execution exec = Execution::Parallel);

// --- squeezing and Wigner ------------------------------------------------------

struct SqueezingResult {
  Trajectory trajectory;
  double eta_initial = 1.0;
  double eta_min = 1.0;
  double t_min = 0.0;
  double steady_eta = 1.0;
  double particle_eta_spread = 0.0;  // max over t of |eta_1 - eta_2|
  std::vector<double> xs;
  std::vector<double> ps;
  Matrix wigner;  // particle 1 at argmin eta
  std::vector<Check> checks;
};

SqueezingResult run_squeezing_snapshot(const ScenarioSpec& spec, std::size_t grid_points = 101,
                                       Execution exec = Execution::Parallel);

// --- design map -------------------------------------------------------------------

struct DesignMapSpec {
  std::vector<double> radii;
  std::vector<double> powers;
  double target_omega = constants::two_pi * 305.4e3;
  double coupling_level = constants::two_pi * 110e3;
  double coherence_level = 10e-6;
  double marked_radius = 90e-9;
  double marked_power = 0.3475;
};

struct DesignPoint {
  double radius = 0.0;
  double power = 0.0;
  double waist = 0.0;
  double omega = 0.0;
  double coupling = 0.0;
  double coherence_time = 0.0;
};

struct ContourPoint {
  double radius = 0.0;
  double power = 0.0;
};

struct DesignMapResult {
  std::vector<DesignPoint> points;  // row-major over (radius, power)
  std::vector<ContourPoint> coupling_contour;
  std::vector<ContourPoint> coherence_contour;
  DesignPoint marked;
};

/// Uses particle 1's tweezer/particle constants and the config's cavity and
/// environment; the waist is re-solved at every point.
DesignMapResult run_design_map(const SystemConfig& config, const DesignMapSpec& spec,
                               Execution exec = Execution::Parallel);

/// Level-set crossings of `values` (row-major radii x powers) by linear
/// interpolation along both grid directions.
std::vector<ContourPoint> extract_contour(const std::vector<double>& radii, const std::vector<double>& powers,
                                          const std::vector<double>& values, double level);

// --- output ------------------------------------------------------------------------

void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

void write_dilution(const std::filesystem::path& dir, const std::vector<DilutionEntry>& entries);
void write_temperature_sweep(const std::filesystem::path& dir, const TemperatureSweepResult& r);
void write_coupling_sweep(const std::filesystem::path& dir, const CouplingSweepResult& r);
void write_squeezing(const std::filesystem::path& dir, const SqueezingResult& r);
void write_design_map(const std::filesystem::path& dir, const DesignMapResult& r);

}  // namespace levcs
