#pragma once

// Per-sample informational measures along an evolution, and their CSV / JSONL
// serialization.

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "levcs/dynamics.hpp"
#include "levcs/parallel.hpp"

namespace levcs {

/// Threshold separating genuine entanglement from numerical zero.
inline constexpr double kEntanglementThreshold = 1e-6;

struct MeasureRecord {
  double t = 0.0;
  std::vector<double> log_negativity;      // one per mode_pairs() entry
  std::vector<double> mode_entropy;        // S of each single mode
  std::vector<double> complement_entropy;  // S of all other modes, per mode
  double total_entropy = 0.0;
  double total_mutual_information = 0.0;
  double particle_mutual_information = 0.0;  // 0 for a single particle
  std::vector<double> squeezing;             // eta per particle
  double min_symplectic = 1.0;
};

struct Trajectory {
  std::size_t num_modes = 0;
  std::vector<double> times;
  std::vector<GaussianState> states;
  std::vector<MeasureRecord> measures;
  std::size_t requested_samples = 0;
  bool truncated = false;
  std::string diagnostic;
};

/// All pairs (j, k), j < k, in lexicographic order; mode 0 is the cavity.
std::vector<std::pair<std::size_t, std::size_t>> mode_pairs(std::size_t num_modes);
std::size_t pair_index(std::size_t num_modes, std::size_t j, std::size_t k);

MeasureRecord measure_state(const GaussianState& state, double t);

/// Measures every sample. With `truncate_on_failure`, a sample whose measures
/// cannot be evaluated ends the trajectory there instead of throwing.
void attach_measures(Trajectory& traj, Execution exec, bool truncate_on_failure = false);

Trajectory run_trajectory(const LinearDynamics& dyn, const GaussianState& s0, const EvolveOptions& opts,
                          Execution exec = Execution::Parallel);

/// 17 significant digits in scientific notation.
std::string format_double(double x);

std::vector<std::string> csv_header(std::size_t num_modes);
void write_csv(std::ostream& out, const Trajectory& traj);
void write_states_jsonl(std::ostream& out, const Trajectory& traj);

/// Time series of one measure column by name (as in the CSV header).
std::vector<double> column(const Trajectory& traj, const std::string& name);

}  // namespace levcs
