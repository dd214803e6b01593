#include "levcs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "levcs/error.hpp"
#include "levcs/measures.hpp"
#include "levcs/units.hpp"

namespace levcs {

using nlohmann::json;

namespace {

std::string fmt(double x) { return format_double(x); }

std::string describe(double value, double target) {
  std::ostringstream msg;
  msg << "value " << value << ", required " << target;
  return msg.str();
}

LinearDynamics dynamics_for(const ModelRates& rates) { return build_linear_dynamics(rates); }

EvolveOptions options_for(const ScenarioSpec& spec, double t_final) {
  EvolveOptions o;
  o.t_final = t_final;
  o.dt = spec.dt;
  o.store_every = spec.store_every;
  o.on_unphysical = spec.on_unphysical;
  return o;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

SystemConfig replicate_first(const SystemConfig& config, std::size_t n) {
  if (n == 0) throw InvalidInput("particle count must be >= 1");
  SystemConfig out = config;
  out.particles.assign(n, config.particles.front());
  return out;
}

}  // namespace

ScenarioSpec scenario_from_json(const json& j) {
  ScenarioSpec spec;
  spec.config = system_config_from_json(j);
  if (!j.contains("scenario")) return spec;
  const auto& s = j.at("scenario");
  if (!s.is_object()) throw InvalidInput("scenario: expected an object");
  for (const auto& [key, _] : s.items())
    if (key != "t_final" && key != "dt" && key != "store_every" && key != "overrides")
      throw InvalidInput("scenario: unknown field '" + key + "'");
  if (s.contains("t_final")) spec.t_final = parse_quantity(s.at("t_final"), Dimension::Time);
  if (s.contains("dt")) spec.dt = parse_quantity(s.at("dt"), Dimension::Time);
  if (s.contains("store_every")) {
    const auto n = s.at("store_every").get<long long>();
    if (n < 1) throw InvalidInput("scenario: store_every must be >= 1");
    spec.store_every = static_cast<std::size_t>(n);
  }
  if (s.contains("overrides")) spec.overrides = rate_overrides_from_json(s.at("overrides"));
  step_count(spec.t_final, spec.dt);
  return spec;
}

json to_json(const ScenarioSpec& spec) {
  json j = to_json(spec.config);
  j["scenario"] = {{"t_final", quantity_json(spec.t_final, Dimension::Time)},
                   {"dt", quantity_json(spec.dt, Dimension::Time)},
                   {"store_every", spec.store_every},
                   {"overrides", to_json(spec.overrides)}};
  return j;
}

ModelRates scenario_rates(const ScenarioSpec& spec) {
  return apply_overrides(model_rates(derive(spec.config)), spec.overrides);
}

Trajectory run_scenario(const ScenarioSpec& spec, Execution exec) {
  const ModelRates rates = scenario_rates(spec);
  return run_trajectory(dynamics_for(rates), initial_state(rates), options_for(spec, spec.t_final), exec);
}

double window_end(double window, double dt) {
  if (!(window > 0.0) || !(dt > 0.0)) throw InvalidInput("window and dt must be > 0");
  const double steps = std::floor(window / dt * (1.0 + 1e-12));
  if (steps < 1.0) throw InvalidInput("window shorter than one time step");
  return steps * dt;
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

json to_json(const std::vector<Check>& checks) {
  json j = json::array();
  for (const auto& c : checks) j.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return j;
}

std::size_t count_birth_death_cycles(const std::vector<double>& series, double threshold) {
  std::size_t cycles = 0;
  bool seen_zero = false;
  bool alive = false;
  for (double v : series) {
    const bool positive = v > threshold;
    if (!positive) {
      if (alive && seen_zero) ++cycles;
      seen_zero = true;
      alive = false;
    } else if (seen_zero) {
      alive = true;
    }
  }
  return cycles;
}

UnitaryResult run_unitary_demo(ScenarioSpec spec, Execution exec) {
  spec.overrides.linewidth = 0.0;
  spec.overrides.damping = 0.0;
  spec.overrides.initial_occupation = 0.0;
  if (spec.config.num_particles() < 2) throw InvalidInput("unitary demo needs at least two particles");

  UnitaryResult r;
  r.trajectory = run_scenario(spec, exec);
  const auto& traj = r.trajectory;
  std::vector<double> purity(traj.states.size(), 0.0);
  parallel_for(
      traj.states.size(),
      [&](std::size_t i) {
        for (double nu : symplectic_eigenvalues(traj.states[i])) purity[i] = std::max(purity[i], std::abs(nu - 1.0));
      },
      exec);
  r.max_purity_deviation = max_of(purity);
  for (const auto& rec : traj.measures)
    for (std::size_t m = 0; m < rec.mode_entropy.size(); ++m)
      r.max_entropy_asymmetry =
          std::max(r.max_entropy_asymmetry, std::abs(rec.mode_entropy[m] - rec.complement_entropy[m]));
  r.particle_cycles = count_birth_death_cycles(column(traj, "LN_1-2"), kEntanglementThreshold);

  r.checks.push_back({"global purity preserved", r.max_purity_deviation < 1e-6,
                      describe(r.max_purity_deviation, 1e-6) + " (max |nu_k - 1|)"});
  r.checks.push_back({"subsystem/complement entropy equality", r.max_entropy_asymmetry < 1e-6,
                      describe(r.max_entropy_asymmetry, 1e-6)});
  r.checks.push_back({"particle-particle LN birth-death cycles", r.particle_cycles >= 2,
                      std::to_string(r.particle_cycles) + " complete cycles, required >= 2"});
  return r;
}

std::vector<DilutionEntry> run_particle_number_sweep(const ScenarioSpec& base, const std::vector<std::size_t>& counts,
                                                     Execution exec) {
  if (counts.empty()) throw InvalidInput("particle-number sweep needs at least one N");
  std::vector<DilutionEntry> out(counts.size());
  parallel_for(
      counts.size(),
      [&](std::size_t i) {
        ScenarioSpec spec = base;
        spec.config = replicate_first(base.config, counts[i]);
        spec.overrides.initial_occupation = 0.0;
        spec.t_final = window_end(kDilutionWindow, base.dt);
        spec.on_unphysical = UnphysicalPolicy::Truncate;
        const ModelRates rates = scenario_rates(spec);

        DilutionEntry& e = out[i];
        e.num_particles = counts[i];
        e.stability = stability(dynamics_for(rates));
        e.trajectory = run_trajectory(dynamics_for(rates), initial_state(rates), options_for(spec, spec.t_final),
                                      Execution::Serial);
        const std::size_t modes = counts[i] + 1;
        const auto pairs = mode_pairs(modes);
        for (const auto& rec : e.trajectory.measures) {
          double lo = std::numeric_limits<double>::infinity();
          double hi = 0.0;
          for (std::size_t p = 0; p < pairs.size(); ++p) {
            if (pairs[p].first == 0) continue;
            lo = std::min(lo, rec.log_negativity[p]);
            hi = std::max(hi, rec.log_negativity[p]);
          }
          if (hi > e.max_particle_ln) e.max_particle_ln = hi;
          if (std::isfinite(lo)) e.pair_asymmetry = std::max(e.pair_asymmetry, hi - lo);
        }
      },
      exec);
  return out;
}

OpenDynamicsResult run_open_dynamics(const ScenarioSpec& spec, Execution exec) {
  OpenDynamicsResult r;
  r.trajectory = run_scenario(spec, exec);
  const auto& traj = r.trajectory;
  const auto ln = column(traj, "LN_1-2");
  const auto info = column(traj, "I_particles");
  const auto info_total = column(traj, "I_total");
  r.max_particle_ln = max_of(ln);
  for (std::size_t i = 0; i < ln.size(); ++i) {
    if (!r.particle_ln_onset && ln[i] > kEntanglementThreshold) r.particle_ln_onset = traj.times[i];
    if (r.particle_ln_onset && !r.particle_ln_death && ln[i] <= kEntanglementThreshold)
      r.particle_ln_death = traj.times[i];
    if (!r.information_onset && info[i] > kEntanglementThreshold) r.information_onset = traj.times[i];
  }

  r.checks.push_back({"particle-particle LN positive on some interval", r.max_particle_ln > kEntanglementThreshold,
                      describe(r.max_particle_ln, kEntanglementThreshold) + " (max LN(1,2))"});
  r.checks.push_back({"I_total(0) = 0", !info_total.empty() && std::abs(info_total.front()) < 1e-9,
                      describe(info_total.empty() ? NAN : info_total.front(), 1e-9)});
  const bool rises_first =
      r.information_onset && r.particle_ln_onset && *r.information_onset < *r.particle_ln_onset;
  r.checks.push_back({"I_particles rises before LN(1,2)", rises_first,
                      "I onset " + (r.information_onset ? fmt(*r.information_onset) : std::string("none")) +
                          " s, LN onset " + (r.particle_ln_onset ? fmt(*r.particle_ln_onset) : std::string("none")) +
                          " s"});
  bool stays = r.particle_ln_death.has_value();
  if (stays) {
    for (std::size_t i = 0; i < info.size(); ++i)
      if (traj.times[i] >= *r.particle_ln_death && !(info[i] > kEntanglementThreshold)) stays = false;
  }
  r.checks.push_back({"I_particles positive after LN(1,2) death", stays,
                      r.particle_ln_death ? "LN death at " + fmt(*r.particle_ln_death) + " s"
                                          : std::string("LN(1,2) never died within the window")});
  return r;
}

PairSeries particle_pair_series(const LinearDynamics& dyn, const GaussianState& s0, const EvolveOptions& opts) {
  if (s0.num_modes() < 3) throw InvalidInput("particle pair series needs two particles");
  EvolveOptions o = opts;
  o.on_unphysical = UnphysicalPolicy::Truncate;
  Evolution evo = evolve(dyn, s0, o);
  PairSeries s;
  s.requested_samples = evo.requested_samples;
  s.truncated = evo.truncated;
  s.diagnostic = evo.diagnostic;
  std::size_t positive = 0;
  for (std::size_t i = 0; i < evo.states.size(); ++i) {
    double ln = 0.0;
    try {
      ln = log_negativity(evo.states[i], 1, 2).log_negativity;
    } catch (const Error& e) {
      s.truncated = true;
      s.diagnostic = "LN evaluation failed at t = " + fmt(evo.times[i]) + " s: " + e.what();
      break;
    }
    s.times.push_back(evo.times[i]);
    s.ln.push_back(ln);
    if (ln > kEntanglementThreshold) ++positive;
  }
  s.max_ln = max_of(s.ln);
  s.positive_fraction = static_cast<double>(positive) / static_cast<double>(s.requested_samples);
  return s;
}

TemperatureSweepResult run_temperature_sweep(const ScenarioSpec& base, const std::vector<double>& diagonal,
                                             const std::vector<double>& grid_axis, Execution exec) {
  if (base.config.num_particles() != 2) throw InvalidInput("temperature sweep needs exactly two particles");
  for (double n : diagonal)
    if (!(n >= 0.0) || !std::isfinite(n)) throw InvalidInput("occupation grid values must be finite and >= 0");
  for (double n : grid_axis)
    if (!(n >= 0.0) || !std::isfinite(n)) throw InvalidInput("occupation grid values must be finite and >= 0");

  TemperatureSweepResult r;
  r.window = derive(base.config).particles.front().coherence_time;
  const double t_final = window_end(r.window, base.dt);
  ModelRates rates = scenario_rates(base);
  const LinearDynamics dyn = dynamics_for(rates);
  const EvolveOptions opts = options_for(base, t_final);

  std::vector<OccupationPoint> points;
  for (double n : diagonal) points.push_back({n, n, 0.0});
  for (double n1 : grid_axis)
    for (double n2 : grid_axis) points.push_back({n1, n2, 0.0});

  parallel_for(
      points.size(),
      [&](std::size_t i) {
        ModelRates local = rates;
        local.particles[0].initial_occupation = points[i].n1;
        local.particles[1].initial_occupation = points[i].n2;
        points[i].max_ln = particle_pair_series(dyn, initial_state(local), opts).max_ln;
      },
      exec);

  r.diagonal.assign(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(diagonal.size()));
  r.grid.assign(points.begin() + static_cast<std::ptrdiff_t>(diagonal.size()), points.end());
  std::vector<OccupationPoint> sorted = r.diagonal;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.n1 < b.n1; });
  for (const auto& p : sorted) {
    if (p.max_ln < kEntanglementThreshold) {
      r.threshold = p.n1;
      break;
    }
  }
  return r;
}

CouplingSweepResult run_coupling_sweep(const ScenarioSpec& base, const std::vector<double>& ratios, Execution exec) {
  if (base.config.num_particles() < 2) throw InvalidInput("coupling sweep needs at least two particles");
  for (double x : ratios)
    if (!std::isfinite(x)) throw InvalidInput("coupling ratios must be finite");

  CouplingSweepResult r;
  r.window = derive(base.config).particles.front().coherence_time;
  const double t_final = window_end(r.window, base.dt);
  const ModelRates rates = scenario_rates(base);
  r.omega = rates.particles.front().omega;
  const double base_coupling = rates.particles.front().coupling;
  r.base_ratio = base_coupling / r.omega;

  std::vector<double> grid = ratios;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  r.rows.resize(grid.size() + 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r.rows[i].ratio = grid[i];
    r.rows[i].coupling = grid[i] * r.omega;
  }
  r.rows.back().ratio = r.base_ratio;
  r.rows.back().coupling = base_coupling;
  std::stable_sort(r.rows.begin(), r.rows.end(), [](const auto& a, const auto& b) { return a.ratio < b.ratio; });

  const EvolveOptions opts = options_for(base, t_final);
  parallel_for(
      r.rows.size(),
      [&](std::size_t i) {
        ModelRates local = rates;
        for (auto& p : local.particles) p.coupling = r.rows[i].coupling;
        const LinearDynamics dyn = dynamics_for(local);
        r.rows[i].stable = stability(dyn).stable;
        r.rows[i].series = particle_pair_series(dyn, initial_state(local), opts);
      },
      exec);
  return r;
}

std::vector<Check> coupling_sweep_checks(const CouplingSweepResult& r, const ScenarioSpec& base, Execution exec) {
  std::vector<Check> checks;
  const CouplingRow* base_row = nullptr;
  const CouplingRow* strong_row = nullptr;
  double weak_max = 0.0;
  std::size_t weak_rows = 0;
  for (const auto& row : r.rows) {
    if (row.ratio == r.base_ratio && !base_row) base_row = &row;
    if (row.ratio >= 1.0 && !strong_row) strong_row = &row;
    if (row.ratio <= 0.2) {
      ++weak_rows;
      weak_max = std::max(weak_max, row.series.max_ln);
    }
  }
  if (!base_row) throw NumericalError("coupling sweep: base row missing");

  ScenarioSpec open = base;
  open.t_final = window_end(r.window, base.dt);
  open.on_unphysical = UnphysicalPolicy::Abort;
  const auto reference = column(run_scenario(open, exec), "LN_1-2");
  double diff = base_row->series.truncated || reference.size() != base_row->series.ln.size()
                    ? std::numeric_limits<double>::infinity()
                    : 0.0;
  if (std::isfinite(diff))
    for (std::size_t i = 0; i < reference.size(); ++i)
      diff = std::max(diff, std::abs(reference[i] - base_row->series.ln[i]));
  checks.push_back({"base row reproduces open dynamics", diff < 1e-9, describe(diff, 1e-9) + " (max |dLN|)"});
  checks.push_back({"zero LN for g/omega <= 0.2", weak_rows > 0 && weak_max <= kEntanglementThreshold,
                    describe(weak_max, kEntanglementThreshold) + " over " + std::to_string(weak_rows) + " rows"});
  if (strong_row)
    checks.push_back({"LN-positive fraction at g/omega >= 1 exceeds base",
                      strong_row->series.positive_fraction > base_row->series.positive_fraction,
                      "fraction " + fmt(strong_row->series.positive_fraction) + " at g/omega = " +
                          fmt(strong_row->ratio) + " vs " + fmt(base_row->series.positive_fraction)});
  return checks;
}

SqueezingResult run_squeezing_snapshot(const ScenarioSpec& spec, std::size_t grid_points, Execution exec) {
  if (spec.config.num_particles() < 1) throw InvalidInput("squeezing snapshot needs a particle");
  if (grid_points < 2) throw InvalidInput("Wigner grid needs at least two points per axis");
  SqueezingResult r;
  r.trajectory = run_scenario(spec, exec);
  const auto& traj = r.trajectory;
  const auto eta = column(traj, "eta_1");
  r.eta_initial = eta.front();
  std::size_t imin = 0;
  for (std::size_t i = 1; i < eta.size(); ++i)
    if (eta[i] < eta[imin]) imin = i;
  r.eta_min = eta[imin];
  r.t_min = traj.times[imin];
  for (const auto& rec : traj.measures) {
    const auto [lo, hi] = std::minmax_element(rec.squeezing.begin(), rec.squeezing.end());
    r.particle_eta_spread = std::max(r.particle_eta_spread, *hi - *lo);
  }

  const ModelRates rates = scenario_rates(spec);
  const auto steady = steady_state(dynamics_for(rates));
  r.steady_eta = 1.0;
  for (std::size_t m = 1; m < steady.state.num_modes(); ++m)
    r.steady_eta = std::min(r.steady_eta, squeezing_degree(steady.state, m));

  const std::size_t particle[] = {1};
  const GaussianState mode = partial_trace(traj.states[imin], particle);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(Eigen::Matrix2d(mode.cov()));
  const double extent = 4.0 * std::sqrt(solver.eigenvalues()(1));
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double u = -extent + 2.0 * extent * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    r.xs.push_back(mode.mean()(0) + u);
    r.ps.push_back(mode.mean()(1) + u);
  }
  r.wigner = wigner(mode, r.xs, r.ps);

  r.checks.push_back({"eta(0) = 1", std::abs(r.eta_initial - 1.0) <= 1e-9, describe(r.eta_initial, 1.0)});
  r.checks.push_back({"global minimum eta near 0.23", std::abs(r.eta_min - 0.23) <= 0.05, describe(r.eta_min, 0.23)});
  r.checks.push_back({"minimum near t = 5.7 us", std::abs(r.t_min - 5.7e-6) <= 1.5e-6, describe(r.t_min, 5.7e-6)});
  r.checks.push_back({"steady-state eta > 0.95", r.steady_eta > 0.95, describe(r.steady_eta, 0.95)});
  r.checks.push_back({"identical particle eta traces", r.particle_eta_spread < 1e-10,
                      describe(r.particle_eta_spread, 1e-10)});
  return r;
}

namespace {

DesignPoint evaluate_design_point(const SystemConfig& config, const DesignMapSpec& spec, double radius, double power) {
  const auto& site = config.particles.front();
  if (!site.particle.density) throw InvalidInput("design map needs a particle density");
  ParticleParams p = site.particle;
  p.radius = radius;
  p.mass.reset();
  TweezerParams t = site.tweezer;
  t.power = power;
  t.waist_y.reset();
  t.waist_convention = WaistConvention::XAxis;
  t.waist = waist_for_target_frequency(spec.target_omega, power, *p.density, p.refractive_index);

  DesignPoint d;
  d.radius = radius;
  d.power = power;
  d.waist = t.waist;
  d.omega = trap_frequencies(p, t).x;
  d.coupling = coupling_strength(p, t, config.cavity, d.omega);
  d.coherence_time = thermal_rates(p, t, config.environment, d.omega).coherence_time;
  return d;
}

}  // namespace

DesignMapResult run_design_map(const SystemConfig& config, const DesignMapSpec& spec, Execution exec) {
  config.validate();
  if (spec.radii.empty() || spec.powers.empty()) throw InvalidInput("design map grids must be nonempty");
  for (double x : spec.radii)
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidInput("design map radii must be > 0");
  for (double x : spec.powers)
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidInput("design map powers must be > 0");

  DesignMapResult r;
  const std::size_t np = spec.powers.size();
  r.points.resize(spec.radii.size() * np);
  parallel_for(
      r.points.size(),
      [&](std::size_t i) { r.points[i] = evaluate_design_point(config, spec, spec.radii[i / np], spec.powers[i % np]); },
      exec);

  std::vector<double> g, tau;
  for (const auto& p : r.points) {
    g.push_back(p.coupling);
    tau.push_back(p.coherence_time);
  }
  r.coupling_contour = extract_contour(spec.radii, spec.powers, g, spec.coupling_level);
  r.coherence_contour = extract_contour(spec.radii, spec.powers, tau, spec.coherence_level);
  r.marked = evaluate_design_point(config, spec, spec.marked_radius, spec.marked_power);
  return r;
}

std::vector<ContourPoint> extract_contour(const std::vector<double>& radii, const std::vector<double>& powers,
                                          const std::vector<double>& values, double level) {
  const std::size_t nr = radii.size();
  const std::size_t np = powers.size();
  if (values.size() != nr * np) throw InvalidInput("contour: value grid size mismatch");
  auto at = [&](std::size_t i, std::size_t j) { return values[i * np + j]; };
  std::vector<ContourPoint> out;
  auto crossing = [&](double a, double b) -> std::optional<double> {
    if ((a - level) * (b - level) > 0.0 || a == b) return std::nullopt;
    if (a == level && b == level) return std::nullopt;
    return (level - a) / (b - a);
  };
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      if (i + 1 < nr) {
        if (auto f = crossing(at(i, j), at(i + 1, j)); f && *f < 1.0)
          out.push_back({radii[i] + *f * (radii[i + 1] - radii[i]), powers[j]});
      }
      if (j + 1 < np) {
        if (auto f = crossing(at(i, j), at(i, j + 1)); f && *f < 1.0 && *f > 0.0)
          out.push_back({radii[i], powers[j] + *f * (powers[j + 1] - powers[j])});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.power != b.power ? a.power < b.power : a.radius < b.radius;
  });
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << text;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ostringstream out;
  write_csv(out, traj);
  write_text_file(path, out.str());
}

namespace {

std::string csv_row(std::initializer_list<double> values) {
  std::string row;
  for (double v : values) row += (row.empty() ? "" : ",") + fmt(v);
  return row + "\n";
}

}  // namespace

void write_dilution(const std::filesystem::path& dir, const std::vector<DilutionEntry>& entries) {
  std::string summary = "N,max_LN_particles,pair_asymmetry,stable,max_real_eig,truncated\n";
  for (const auto& e : entries) {
    write_trajectory_csv(dir / ("dilution_N" + std::to_string(e.num_particles) + ".csv"), e.trajectory);
    summary += std::to_string(e.num_particles) + "," + fmt(e.max_particle_ln) + "," + fmt(e.pair_asymmetry) + "," +
               (e.stability.stable ? "1" : "0") + "," + fmt(e.stability.max_real_part) + "," +
               (e.trajectory.truncated ? "1" : "0") + "\n";
  }
  write_text_file(dir / "dilution_summary.csv", summary);
}

void write_temperature_sweep(const std::filesystem::path& dir, const TemperatureSweepResult& r) {
  std::string diag = "n0,max_LN_1-2\n";
  for (const auto& p : r.diagonal) diag += fmt(p.n1) + "," + fmt(p.max_ln) + "\n";
  std::string grid = "n1,n2,max_LN_1-2\n";
  for (const auto& p : r.grid) grid += csv_row({p.n1, p.n2, p.max_ln});
  write_text_file(dir / "temperature_diagonal.csv", diag);
  write_text_file(dir / "temperature_grid.csv", grid);
  json summary{{"window_s", r.window}, {"threshold_n0", r.threshold ? json(*r.threshold) : json(nullptr)}};
  write_text_file(dir / "temperature_summary.json", summary.dump(2) + "\n");
}

void write_coupling_sweep(const std::filesystem::path& dir, const CouplingSweepResult& r) {
  std::string heat = "g_over_omega,g_rad_s,t,LN_1-2\n";
  std::string summary = "g_over_omega,g_rad_s,stable,truncated,max_LN_1-2,positive_fraction\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.series.ln.size(); ++i)
      heat += csv_row({row.ratio, row.coupling, row.series.times[i], row.series.ln[i]});
    summary += fmt(row.ratio) + "," + fmt(row.coupling) + "," + (row.stable ? "1" : "0") + "," +
               (row.series.truncated ? "1" : "0") + "," + fmt(row.series.max_ln) + "," +
               fmt(row.series.positive_fraction) + "\n";
  }
  write_text_file(dir / "coupling_heatmap.csv", heat);
  write_text_file(dir / "coupling_summary.csv", summary);
}

void write_squeezing(const std::filesystem::path& dir, const SqueezingResult& r) {
  const auto& traj = r.trajectory;
  std::string eta = "t";
  for (std::size_t m = 1; m < traj.num_modes; ++m) eta += ",eta_" + std::to_string(m);
  eta += "\n";
  for (const auto& rec : traj.measures) {
    eta += fmt(rec.t);
    for (double e : rec.squeezing) eta += "," + fmt(e);
    eta += "\n";
  }
  std::string w = "x,p,W\n";
  for (std::size_t i = 0; i < r.xs.size(); ++i)
    for (std::size_t j = 0; j < r.ps.size(); ++j)
      w += csv_row({r.xs[i], r.ps[j], r.wigner(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  write_text_file(dir / "squeezing.csv", eta);
  write_text_file(dir / "wigner_particle1.csv", w);
  json summary{{"eta_initial", r.eta_initial}, {"eta_min", r.eta_min},   {"t_min_s", r.t_min},
               {"steady_eta", r.steady_eta},   {"particle_eta_spread", r.particle_eta_spread},
               {"checks", to_json(r.checks)}};
  write_text_file(dir / "squeezing_summary.json", summary.dump(2) + "\n");
}

void write_design_map(const std::filesystem::path& dir, const DesignMapResult& r) {
  std::string grid = "radius_m,power_W,waist_m,omega_rad_s,g_rad_s,tau_s\n";
  for (const auto& p : r.points) grid += csv_row({p.radius, p.power, p.waist, p.omega, p.coupling, p.coherence_time});
  auto contour = [](const std::vector<ContourPoint>& pts) {
    std::string s = "radius_m,power_W\n";
    for (const auto& p : pts) s += csv_row({p.radius, p.power});
    return s;
  };
  write_text_file(dir / "design_map.csv", grid);
  write_text_file(dir / "contour_coupling.csv", contour(r.coupling_contour));
  write_text_file(dir / "contour_coherence.csv", contour(r.coherence_contour));
  const auto& m = r.marked;
  json summary{{"marked_point",
                {{"radius_m", m.radius},
                 {"power_W", m.power},
                 {"waist_m", m.waist},
                 {"omega_rad_s", m.omega},
                 {"g_rad_s", m.coupling},
                 {"tau_s", m.coherence_time}}}};
  write_text_file(dir / "design_map_summary.json", summary.dump(2) + "\n");
}

}  // namespace levcs
