#include "levcs/trajectory.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <optional>

#include "levcs/error.hpp"
#include "levcs/measures.hpp"

namespace levcs {

std::vector<std::pair<std::size_t, std::size_t>> mode_pairs(std::size_t num_modes) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t j = 0; j < num_modes; ++j)
    for (std::size_t k = j + 1; k < num_modes; ++k) out.emplace_back(j, k);
  return out;
}

std::size_t pair_index(std::size_t num_modes, std::size_t j, std::size_t k) {
  if (j > k) std::swap(j, k);
  if (j == k || k >= num_modes) throw InvalidInput("pair_index: invalid pair");
  // pairs before row j: sum_{r<j} (M - 1 - r)
  return j * (2 * num_modes - j - 1) / 2 + (k - j - 1);
}

MeasureRecord measure_state(const GaussianState& state, double t) {
  const std::size_t m = state.num_modes();
  MeasureRecord rec;
  rec.t = t;
  for (const auto& [j, k] : mode_pairs(m)) rec.log_negativity.push_back(log_negativity(state, j, k).log_negativity);

  const auto nu = symplectic_eigenvalues(state);
  rec.min_symplectic = nu.front();
  for (double v : nu) rec.total_entropy += entropy_function(v);

  std::vector<std::size_t> rest;
  for (std::size_t mode = 0; mode < m; ++mode) {
    const std::size_t single[] = {mode};
    rec.mode_entropy.push_back(von_neumann_entropy(partial_trace(state, single)));
    rest.clear();
    for (std::size_t r = 0; r < m; ++r)
      if (r != mode) rest.push_back(r);
    rec.complement_entropy.push_back(rest.empty() ? 0.0 : von_neumann_entropy(partial_trace(state, rest)));
  }

  double sum = 0.0;
  for (double s : rec.mode_entropy) sum += s;
  rec.total_mutual_information = sum - rec.total_entropy;
  // Particles jointly are the complement of the cavity.
  if (m >= 3) rec.particle_mutual_information = sum - rec.mode_entropy[0] - rec.complement_entropy[0];

  for (std::size_t mode = 1; mode < m; ++mode) rec.squeezing.push_back(squeezing_degree(state, mode));
  return rec;
}

void attach_measures(Trajectory& traj, Execution exec, bool truncate_on_failure) {
  const std::size_t n = traj.states.size();
  std::vector<std::optional<MeasureRecord>> records(n);
  std::vector<std::string> failures(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        try {
          records[i] = measure_state(traj.states[i], traj.times[i]);
        } catch (const Error& e) {
          if (!truncate_on_failure) throw;
          failures[i] = e.what();
        }
      },
      exec);

  traj.measures.clear();
  traj.measures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!records[i]) {
      traj.truncated = true;
      traj.diagnostic = "measures failed at t = " + format_double(traj.times[i]) + " s: " + failures[i];
      traj.times.resize(i);
      traj.states.erase(traj.states.begin() + static_cast<std::ptrdiff_t>(i), traj.states.end());
      break;
    }
    traj.measures.push_back(std::move(*records[i]));
  }
}

Trajectory run_trajectory(const LinearDynamics& dyn, const GaussianState& s0, const EvolveOptions& opts,
                          Execution exec) {
  Evolution evo = evolve(dyn, s0, opts);
  Trajectory traj;
  traj.num_modes = s0.num_modes();
  traj.times = std::move(evo.times);
  traj.states = std::move(evo.states);
  traj.requested_samples = evo.requested_samples;
  traj.truncated = evo.truncated;
  traj.diagnostic = evo.diagnostic;
  attach_measures(traj, exec, opts.on_unphysical == UnphysicalPolicy::Truncate);
  return traj;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::vector<std::string> csv_header(std::size_t num_modes) {
  std::vector<std::string> cols{"t"};
  for (const auto& [j, k] : mode_pairs(num_modes)) cols.push_back("LN_" + pair_label(j, k));
  for (std::size_t m = 0; m < num_modes; ++m) cols.push_back("S_" + mode_label(m));
  for (std::size_t m = 0; m < num_modes; ++m) cols.push_back("S_rest_" + mode_label(m));
  cols.insert(cols.end(), {"S_total", "I_total", "I_particles"});
  for (std::size_t m = 1; m < num_modes; ++m) cols.push_back("eta_" + mode_label(m));
  cols.push_back("nu_min");
  return cols;
}

namespace {

std::vector<double> row_values(const MeasureRecord& r) {
  std::vector<double> v{r.t};
  v.insert(v.end(), r.log_negativity.begin(), r.log_negativity.end());
  v.insert(v.end(), r.mode_entropy.begin(), r.mode_entropy.end());
  v.insert(v.end(), r.complement_entropy.begin(), r.complement_entropy.end());
  v.insert(v.end(), {r.total_entropy, r.total_mutual_information, r.particle_mutual_information});
  v.insert(v.end(), r.squeezing.begin(), r.squeezing.end());
  v.push_back(r.min_symplectic);
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const Trajectory& traj) {
  const auto header = csv_header(traj.num_modes);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& rec : traj.measures) {
    const auto values = row_values(rec);
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << format_double(values[i]);
    out << '\n';
  }
}

void write_states_jsonl(std::ostream& out, const Trajectory& traj) {
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    nlohmann::json j = traj.states[i];
    j["t"] = traj.times[i];
    out << j.dump() << '\n';
  }
}

std::vector<double> column(const Trajectory& traj, const std::string& name) {
  const auto header = csv_header(traj.num_modes);
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw InvalidInput("unknown measure column '" + name + "'");
  const auto idx = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  out.reserve(traj.measures.size());
  for (const auto& rec : traj.measures) out.push_back(row_values(rec)[idx]);
  return out;
}

}  // namespace levcs
