// levcs: derive rates, evolve, solve steady states and run the sweeps of a
// coherent-scattering cavity with levitated particles.
//
// Exit codes: 0 success, 1 input error, 2 assertion failure (a failed
// scenario check or an unphysical state during evolution).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "levcs/config.hpp"
#include "levcs/dynamics.hpp"
#include "levcs/error.hpp"
#include "levcs/experiments.hpp"
#include "levcs/measures.hpp"
#include "levcs/parallel.hpp"
#include "levcs/report.hpp"
#include "levcs/trajectory.hpp"
#include "levcs/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace levcs;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitAssertion = 2;

struct Globals {
  std::string config;
  std::string preset = "design";
  std::size_t num_particles = 2;
  std::string out = ".";
  std::string dt;
  std::string t_final;
  int workers = 0;
  long long seed = 0;  // reserved: every run is deterministic
  bool serial = false;
};

Execution execution(const Globals& g) { return g.serial ? Execution::Serial : Execution::Parallel; }

// Config file (with its optional "scenario" section) or a built-in preset,
// then the command-line time settings on top.
ScenarioSpec load_spec(const Globals& g, std::optional<double> default_t_final = std::nullopt) {
  ScenarioSpec spec;
  bool file_sets_t_final = false;
  if (!g.config.empty()) {
    const json j = read_json_file(g.config);
    spec = scenario_from_json(j);
    file_sets_t_final = j.contains("scenario") && j.at("scenario").contains("t_final");
  } else if (g.preset == "design") {
    spec.config = design_point_config(g.num_particles);
  } else {
    spec.config = experiment_config(g.num_particles);
  }
  if (default_t_final && !file_sets_t_final) spec.t_final = *default_t_final;
  if (!g.dt.empty()) spec.dt = parse_quantity_text(g.dt, Dimension::Time);
  if (!g.t_final.empty()) spec.t_final = parse_quantity_text(g.t_final, Dimension::Time);
  spec.config.validate();
  return spec;
}

fs::path prepare_out(const Globals& g) {
  const fs::path dir = g.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

int report_checks(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    std::printf("%s  %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  return all_passed(checks) ? 0 : kExitAssertion;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidInput("grid needs at least one point");
  if (!(hi >= lo)) throw InvalidInput("grid upper bound below lower bound");
  std::vector<double> v(n, lo);
  for (std::size_t i = 1; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json measures_json(const MeasureRecord& rec, std::size_t num_modes) {
  json j;
  const auto pairs = mode_pairs(num_modes);
  for (std::size_t p = 0; p < pairs.size(); ++p)
    j["log_negativity"][pair_label(pairs[p].first, pairs[p].second)] = rec.log_negativity[p];
  j["total_mutual_information"] = rec.total_mutual_information;
  j["particle_mutual_information"] = rec.particle_mutual_information;
  j["total_entropy"] = rec.total_entropy;
  for (std::size_t m = 1; m < num_modes; ++m) j["squeezing"][mode_label(m)] = rec.squeezing[m - 1];
  j["min_symplectic_eigenvalue"] = rec.min_symplectic;
  return j;
}

// --- verbs --------------------------------------------------------------------

int cmd_derive(const Globals& g) {
  const ScenarioSpec spec = load_spec(g);
  const auto dir = prepare_out(g);
  const json derived = to_json(derive(spec.config));
  write_json(dir / "derived.json", derived);
  const auto findings = compute_discrepancies(spec.config, experiment_config(spec.config.num_particles()));
  write_text_file(dir / "discrepancy_report.md", discrepancy_report(findings));
  std::cout << derived.dump(2) << "\n";
  return 0;
}

struct EvolveArgs {
  std::string scenario = "custom";
  std::size_t store_every = 0;
  bool states = false;
  bool truncate = false;
};

int cmd_evolve(const Globals& g, const EvolveArgs& a) {
  ScenarioSpec spec = load_spec(g, a.scenario == "unitary" ? std::optional<double>(kUnitaryWindow) : std::nullopt);
  if (a.store_every > 0) spec.store_every = a.store_every;
  if (a.truncate) spec.on_unphysical = UnphysicalPolicy::Truncate;
  const auto dir = prepare_out(g);
  const Execution exec = execution(g);

  json summary = {{"scenario", a.scenario}, {"spec", to_json(spec)}};
  std::vector<Check> checks;
  const Trajectory* traj = nullptr;
  UnitaryResult unitary;
  OpenDynamicsResult open;
  Trajectory custom;
  if (a.scenario == "unitary") {
    unitary = run_unitary_demo(spec, exec);
    traj = &unitary.trajectory;
    checks = unitary.checks;
    summary["max_purity_deviation"] = unitary.max_purity_deviation;
    summary["max_entropy_asymmetry"] = unitary.max_entropy_asymmetry;
    summary["particle_birth_death_cycles"] = unitary.particle_cycles;
  } else if (a.scenario == "open") {
    open = run_open_dynamics(spec, exec);
    traj = &open.trajectory;
    checks = open.checks;
    summary["max_particle_ln"] = open.max_particle_ln;
    summary["particle_ln_onset_s"] = optional_json(open.particle_ln_onset);
    summary["particle_ln_death_s"] = optional_json(open.particle_ln_death);
    summary["information_onset_s"] = optional_json(open.information_onset);
  } else {
    custom = run_scenario(spec, exec);
    traj = &custom;
  }

  write_trajectory_csv(dir / "trajectory.csv", *traj);
  if (a.states) {
    std::ofstream out(dir / "states.jsonl");
    if (!out) throw InvalidInput("cannot write states.jsonl");
    write_states_jsonl(out, *traj);
  }
  Evolution evo;
  evo.states = traj->states;
  summary["samples"] = traj->times.size();
  summary["requested_samples"] = traj->requested_samples;
  summary["truncated"] = traj->truncated;
  summary["diagnostic"] = traj->diagnostic;
  summary["mean_is_zero"] = mean_is_zero(evo);
  summary["checks"] = to_json(checks);
  write_json(dir / "summary.json", summary);
  std::printf("%zu samples written to %s\n", traj->times.size(), (dir / "trajectory.csv").string().c_str());
  return report_checks(checks);
}

int cmd_steady(const Globals& g) {
  const ScenarioSpec spec = load_spec(g);
  const auto dir = prepare_out(g);
  const LinearDynamics dyn = build_linear_dynamics(scenario_rates(spec));
  const auto ss = steady_state(dyn);

  json spectrum = json::array();
  for (const auto& ev : ss.stability.eigenvalues) spectrum.push_back({ev.real(), ev.imag()});
  json cov = json::array();
  for (Eigen::Index i = 0; i < ss.state.cov().rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < ss.state.cov().cols(); ++k) row.push_back(ss.state.cov()(i, k));
    cov.push_back(row);
  }
  const json report = {
      {"residual_max_abs", ss.residual},
      {"residual_stored_max_abs", ss.residual_stored},
      {"noise_max_abs", ss.noise_scale},
      {"relative_residual", ss.relative_residual()},
      {"max_real_eigenvalue", ss.stability.max_real_part},
      {"spectrum", spectrum},
      {"measures", measures_json(measure_state(ss.state, 0.0), ss.state.num_modes())},
      {"covariance", cov},
  };
  write_json(dir / "steady.json", report);
  std::cout << report["measures"].dump(2) << "\n";
  return 0;
}

struct SweepArgs {
  std::string kind;
  std::vector<std::size_t> counts{2, 3, 4};
  double diagonal_max = 0.475;
  std::size_t diagonal_points = 20;
  double grid_max = 0.3;
  std::size_t grid_points = 7;
  double ratio_max = 1.0;
  std::size_t ratio_points = 20;
};

int cmd_sweep(const Globals& g, const SweepArgs& a) {
  const ScenarioSpec spec = load_spec(g);
  const auto dir = prepare_out(g);
  const Execution exec = execution(g);
  if (a.kind == "particles") {
    const auto entries = run_particle_number_sweep(spec, a.counts, exec);
    write_dilution(dir, entries);
    for (const auto& e : entries)
      std::printf("N = %zu: max LN %s, pair spread %s%s\n", e.num_particles, format_double(e.max_particle_ln).c_str(),
                  format_double(e.pair_asymmetry).c_str(), e.stability.stable ? "" : " (unstable)");
    return 0;
  }
  if (a.kind == "temperature") {
    const auto r = run_temperature_sweep(spec, linspace(0.0, a.diagonal_max, a.diagonal_points),
                                         linspace(0.0, a.grid_max, a.grid_points), exec);
    write_temperature_sweep(dir, r);
    std::printf("window %s s, threshold %s\n", format_double(r.window).c_str(),
                r.threshold ? format_double(*r.threshold).c_str() : "none");
    return 0;
  }
  std::vector<double> ratios = linspace(0.0, a.ratio_max, a.ratio_points + 1);
  ratios.erase(ratios.begin());
  const auto r = run_coupling_sweep(spec, ratios, exec);
  write_coupling_sweep(dir, r);
  const auto checks = coupling_sweep_checks(r, spec, exec);
  write_json(dir / "coupling_checks.json", to_json(checks));
  return report_checks(checks);
}

int cmd_wigner(const Globals& g, std::size_t grid_points) {
  const ScenarioSpec spec = load_spec(g);
  const auto dir = prepare_out(g);
  const auto r = run_squeezing_snapshot(spec, grid_points, execution(g));
  write_squeezing(dir, r);
  return report_checks(r.checks);
}

struct DesignMapArgs {
  double radius_min = 50.0;   // nm
  double radius_max = 150.0;  // nm
  std::size_t radius_points = 41;
  double power_min = 100.0;  // mW
  double power_max = 600.0;  // mW
  std::size_t power_points = 41;
  std::string target;
};

int cmd_design_map(const Globals& g, const DesignMapArgs& a) {
  const ScenarioSpec spec = load_spec(g);
  const auto dir = prepare_out(g);
  DesignMapSpec m;
  for (double r : linspace(a.radius_min, a.radius_max, a.radius_points)) m.radii.push_back(r * 1e-9);
  for (double p : linspace(a.power_min, a.power_max, a.power_points)) m.powers.push_back(p * 1e-3);
  if (!a.target.empty()) m.target_omega = parse_quantity_text(a.target, Dimension::AngularRate);
  const auto r = run_design_map(spec.config, m, execution(g));
  write_design_map(dir, r);
  std::printf("%zu grid points, %zu coupling-contour points, %zu coherence-contour points\n", r.points.size(),
              r.coupling_contour.size(), r.coherence_contour.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian dynamics of levitated particles coupled to an optical cavity"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the verb
  Globals g;
  app.add_option("--config", g.config, "JSON system config (unit-tagged fields)")->check(CLI::ExistingFile);
  app.add_option("--preset", g.preset, "Built-in parameters when no config is given")
      ->check(CLI::IsMember({"design", "experiment"}));
  app.add_option("--particles", g.num_particles, "Particle count for the preset")->check(CLI::Range(1, 64));
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--dt", g.dt, "Time step, e.g. 1e-9 or 1:ns");
  app.add_option("--t-final", g.t_final, "Final time, e.g. 20:us");
  app.add_option("--workers", g.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "Reserved; dynamics are deterministic");
  app.add_flag("--serial", g.serial, "Use the serial reference path");

  auto* derive_cmd = app.add_subcommand("derive", "Write derived rates and the discrepancy report");

  EvolveArgs ev;
  auto* evolve_cmd = app.add_subcommand("evolve", "Time evolution with measures per sample");
  evolve_cmd->add_option("--scenario", ev.scenario, "custom, unitary or open")
      ->check(CLI::IsMember({"custom", "unitary", "open"}));
  evolve_cmd->add_option("--store-every", ev.store_every, "Keep every n-th step");
  evolve_cmd->add_flag("--states", ev.states, "Also write states.jsonl");
  evolve_cmd->add_flag("--truncate", ev.truncate, "Stop at the first unphysical state instead of failing");

  auto* steady_cmd = app.add_subcommand("steady", "Steady state, residual and spectrum");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Particle-number, initial-occupation or coupling sweep");
  sweep_cmd->add_option("kind", sw.kind, "particles, temperature or coupling")
      ->required()
      ->check(CLI::IsMember({"particles", "temperature", "coupling"}));
  sweep_cmd->add_option("--counts", sw.counts, "Particle counts")->delimiter(',');
  sweep_cmd->add_option("--diagonal-max", sw.diagonal_max, "Largest equal occupation");
  sweep_cmd->add_option("--diagonal-points", sw.diagonal_points, "Diagonal points from 0");
  sweep_cmd->add_option("--grid-max", sw.grid_max, "Largest occupation on each grid axis");
  sweep_cmd->add_option("--grid-points", sw.grid_points, "Points per grid axis");
  sweep_cmd->add_option("--ratio-max", sw.ratio_max, "Largest g/omega");
  sweep_cmd->add_option("--ratio-points", sw.ratio_points, "Number of g/omega values");

  std::size_t wigner_points = 101;
  auto* wigner_cmd = app.add_subcommand("wigner", "Squeezing trace and Wigner grid at maximal squeezing");
  wigner_cmd->add_option("--grid-points", wigner_points, "Points per phase-space axis");

  DesignMapArgs dm;
  auto* map_cmd = app.add_subcommand("design-map", "omega, g and tau over radius and tweezer power");
  map_cmd->add_option("--radius-min", dm.radius_min, "nm");
  map_cmd->add_option("--radius-max", dm.radius_max, "nm");
  map_cmd->add_option("--radius-points", dm.radius_points);
  map_cmd->add_option("--power-min", dm.power_min, "mW");
  map_cmd->add_option("--power-max", dm.power_max, "mW");
  map_cmd->add_option("--power-points", dm.power_points);
  map_cmd->add_option("--target", dm.target, "Pinned trap frequency, e.g. 305.4:2pi*kHz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    set_worker_count(g.workers);
    if (*derive_cmd) return cmd_derive(g);
    if (*evolve_cmd) return cmd_evolve(g, ev);
    if (*steady_cmd) return cmd_steady(g);
    if (*sweep_cmd) return cmd_sweep(g, sw);
    if (*wigner_cmd) return cmd_wigner(g, wigner_points);
    if (*map_cmd) return cmd_design_map(g, dm);
  } catch (const NonPhysicalState& e) {
    std::fprintf(stderr, "assertion failed: %s\n", e.what());
    return kExitAssertion;
  } catch (const levcs::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: malformed config: %s\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}
