// Acceptance runner: one PASS/FAIL line per criterion. Exit status 0 when all
// criteria pass, 2 otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "levcs/config.hpp"
#include "levcs/dynamics.hpp"
#include "levcs/experiments.hpp"
#include "levcs/measures.hpp"
#include "levcs/report.hpp"
#include "support.hpp"

using namespace levcs;
using constants::two_pi;

namespace {

// --- pinned tolerances ---------------------------------------------------------
constexpr double kOmegaExperiment = two_pi * 305e3;
constexpr double kOmegaTolerance = 0.01;
constexpr double kZpfExperiment = 3.1e-12;
constexpr double kZpfTolerance = 0.03;
constexpr double kCouplingDesign = two_pi * 109.8e3;
constexpr double kCouplingTolerance = 0.10;
constexpr double kPurityTolerance = 1e-6;
constexpr double kEntropyTolerance = 1e-6;
constexpr std::size_t kMinCycles = 2;
constexpr double kOracleTolerance = 1e-8;
constexpr double kOracleSpan = 20e-6;
constexpr double kOracleCheckpoint = 1e-6;
constexpr std::size_t kOracleSubsteps = 10;  // RK4 at dt / 10
constexpr double kResidualTolerance = 1e-10;
constexpr double kConvergenceTolerance = 1e-6;
constexpr double kConvergenceDt = 1e6;
constexpr double kConvergenceTime = 2e6;
constexpr double kTotalInformation = 16.3;
constexpr double kParticleInformation = 15.1;
constexpr double kInformationTolerance = 0.25;
constexpr double kThresholdLow = 0.12;
constexpr double kThresholdHigh = 0.20;
constexpr double kHotOccupation = 0.43;
constexpr double kWeakCoupling = 0.2;
constexpr double kMidCoupling = 0.36;
constexpr double kStrongCoupling = 1.0;
constexpr double kEtaInitialTolerance = 1e-9;
constexpr double kEtaMin = 0.23;
constexpr double kEtaMinTolerance = 0.05;
constexpr double kEtaTime = 5.7e-6;
constexpr double kEtaTimeTolerance = 1.5e-6;
constexpr double kSteadyEta = 0.95;
constexpr double kPairSymmetry = 1e-10;
constexpr std::size_t kGaussianCases = 1000;
constexpr std::size_t kNuTildeCases = 1000;
constexpr std::size_t kClosedFormDraws = 100;
constexpr std::size_t kWignerCases = 20;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

ScenarioSpec design_spec() {
  ScenarioSpec spec;
  spec.config = design_point_config();
  return spec;
}

Outcome derivation_fidelity() {
  const auto p = derive(experiment_config()).particles.front();
  const double d_omega = p.omega / kOmegaExperiment - 1.0;
  const double d_zpf = p.x_zpf / kZpfExperiment - 1.0;
  return {std::abs(d_omega) < kOmegaTolerance && std::abs(d_zpf) < kZpfTolerance,
          "omega = 2pi x " + num(p.omega / two_pi / 1e3) + " kHz (" + num(100 * d_omega) + "%), x_zpf = " +
              num(p.x_zpf * 1e12) + " pm (" + num(100 * d_zpf) + "%)"};
}

Outcome coupling_reproduction() {
  const auto p = derive(design_point_config()).particles.front();
  const double d = p.coupling / kCouplingDesign - 1.0;
  return {std::abs(d) < kCouplingTolerance,
          "g = 2pi x " + num(p.coupling / two_pi / 1e3) + " kHz (" + num(100 * d) + "%), mode volume pi w^2 L / 4"};
}

Outcome unitary_suite() {
  ScenarioSpec spec = design_spec();
  spec.t_final = kUnitaryWindow;
  const auto r = run_unitary_demo(spec);
  const bool purity = r.max_purity_deviation < kPurityTolerance;
  const bool entropy = r.max_entropy_asymmetry < kEntropyTolerance;
  const bool cycles = r.particle_cycles >= kMinCycles;
  const auto stab = stability(build_linear_dynamics(scenario_rates([&] {
    ScenarioSpec s = spec;
    s.overrides.linewidth = 0.0;
    s.overrides.damping = 0.0;
    return s;
  }())));
  return {purity && entropy && cycles,
          std::string(purity ? "" : "[purity] ") + (entropy ? "" : "[entropy] ") + (cycles ? "" : "[cycles] ") +
              "max|nu-1| = " + num(r.max_purity_deviation) + ", max|S(A)-S(B)| = " + num(r.max_entropy_asymmetry) +
              ", LN(1,2) birth-death cycles = " + std::to_string(r.particle_cycles) +
              ", lossless max Re(eig A) = " + num(stab.max_real_part) + " s^-1"};
}

Outcome oracle_equivalence() {
  const auto config = design_point_config();
  const auto dyn = build_linear_dynamics(config);
  const auto s0 = initial_state(config);
  EvolveOptions opts;
  opts.t_final = kOracleSpan;
  opts.dt = kDefaultDt;
  opts.store_every = static_cast<std::size_t>(std::lround(kOracleCheckpoint / kDefaultDt));
  const auto evo = evolve(dyn, s0, opts);
  const auto substeps = static_cast<std::size_t>(std::lround(kOracleCheckpoint / kDefaultDt)) * kOracleSubsteps;
  Matrix v = s0.cov();
  double diff = 0.0;
  for (std::size_t k = 1; k < evo.states.size(); ++k) {
    v = testing::rk4_covariance(dyn, v, kOracleCheckpoint, substeps);
    diff = std::max(diff, (evo.states[k].cov() - v).cwiseAbs().maxCoeff());
  }
  return {diff < kOracleTolerance, "max-abs |V_exact - V_rk4| = " + num(diff) + " over " +
                                       std::to_string(evo.states.size() - 1) + " checkpoints to 20 us"};
}

Outcome steady_state_criterion() {
  const auto config = design_point_config();
  const auto dyn = build_linear_dynamics(config);
  const auto ss = steady_state(dyn);
  EvolveOptions opts;
  opts.t_final = kConvergenceTime;
  opts.dt = kConvergenceDt;
  const auto evo = evolve(dyn, initial_state(config), opts);
  const double conv = (evo.states.back().cov() - ss.state.cov()).cwiseAbs().maxCoeff();
  double max_ln = 0.0;
  for (std::size_t j = 0; j < ss.state.num_modes(); ++j)
    for (std::size_t k = j + 1; k < ss.state.num_modes(); ++k)
      max_ln = std::max(max_ln, log_negativity(ss.state, j, k).log_negativity);
  const auto rec = measure_state(ss.state, 0.0);
  const double di = rec.total_mutual_information / kTotalInformation - 1.0;
  const double dp = rec.particle_mutual_information / kParticleInformation - 1.0;

  // sensitivity: the same numeral read as millibar
  SystemConfig mbar = config;
  mbar.environment.pressure *= 100.0;
  const auto rec_mbar = measure_state(steady_state(build_linear_dynamics(mbar)).state, 0.0);

  const bool ok = ss.relative_residual() < kResidualTolerance && conv < kConvergenceTolerance && max_ln == 0.0 &&
                  std::abs(di) <= kInformationTolerance && std::abs(dp) <= kInformationTolerance;
  return {ok, "residual/|D| = " + num(ss.relative_residual()) + " (stored V: " +
                  num(ss.residual_stored / ss.noise_scale) + "), |V_evolve - V_ss| = " + num(conv) +
                  ", max LN = " + num(max_ln) + ", I_total = " + num(rec.total_mutual_information) + " (" +
                  num(100 * di) + "%), I_particles = " + num(rec.particle_mutual_information) + " (" +
                  num(100 * dp) + "%); millibar reading: I_total = " + num(rec_mbar.total_mutual_information) +
                  ", I_particles = " + num(rec_mbar.particle_mutual_information)};
}

Outcome entanglement_threshold() {
  std::vector<double> diagonal;
  for (int i = 0; i < 20; ++i) diagonal.push_back(0.025 * i);
  const auto spec = design_spec();
  const auto r = run_temperature_sweep(spec, diagonal, {});
  const auto hot = run_temperature_sweep(spec, {kHotOccupation}, {});
  const double hot_ln = hot.diagonal.front().max_ln;
  const bool in_range = r.threshold && *r.threshold >= kThresholdLow && *r.threshold <= kThresholdHigh;
  const bool hot_zero = hot_ln <= kEntanglementThreshold;
  return {in_range && hot_zero, "threshold n0 = " + (r.threshold ? num(*r.threshold) : std::string("none")) +
                                    " (window tau = " + num(r.window * 1e6) + " us, 20-point diagonal), max LN at n0 = " +
                                    num(kHotOccupation) + ": " + num(hot_ln)};
}

Outcome coupling_sweep() {
  std::vector<double> ratios;
  for (int i = 1; i <= 20; ++i) ratios.push_back(0.05 * i);
  ratios.push_back(kMidCoupling);
  const auto r = run_coupling_sweep(design_spec(), ratios);
  double weak = 0.0;
  const CouplingRow* mid = nullptr;
  const CouplingRow* strong = nullptr;
  for (const auto& row : r.rows) {
    if (row.ratio <= kWeakCoupling + 1e-12) weak = std::max(weak, row.series.max_ln);
    if (std::abs(row.ratio - kMidCoupling) < 1e-12) mid = &row;
    if (std::abs(row.ratio - kStrongCoupling) < 1e-12) strong = &row;
  }
  const bool ok = weak <= kEntanglementThreshold && mid && mid->series.max_ln > kEntanglementThreshold && strong &&
                  strong->series.positive_fraction > mid->series.positive_fraction;
  std::size_t truncated = 0;
  for (const auto& row : r.rows) truncated += row.series.truncated ? 1 : 0;
  return {ok, "max LN for g/omega <= 0.2: " + num(weak) + ", max LN at 0.36: " + (mid ? num(mid->series.max_ln) : "-") +
                  ", positive fraction 1.0 vs 0.36: " + (strong ? num(strong->series.positive_fraction) : "-") +
                  " vs " + (mid ? num(mid->series.positive_fraction) : "-") + " (" + std::to_string(r.rows.size()) +
                  " rows, " + std::to_string(truncated) + " truncated by instability)"};
}

Outcome squeezing() {
  ScenarioSpec spec = design_spec();
  spec.t_final = 20e-6;
  const auto r = run_squeezing_snapshot(spec, 41);
  const bool ok = std::abs(r.eta_initial - 1.0) <= kEtaInitialTolerance &&
                  std::abs(r.eta_min - kEtaMin) <= kEtaMinTolerance &&
                  std::abs(r.t_min - kEtaTime) <= kEtaTimeTolerance && r.steady_eta > kSteadyEta;
  return {ok, "eta(0) = " + num(r.eta_initial) + ", min eta = " + num(r.eta_min) + " at " + num(r.t_min * 1e6) +
                  " us, steady eta = " + num(r.steady_eta)};
}

Outcome dilution() {
  const auto entries = run_particle_number_sweep(design_spec(), {2, 3, 4});
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (i > 0 && e.max_particle_ln > entries[i - 1].max_particle_ln) ok = false;
    if (e.pair_asymmetry >= kPairSymmetry) ok = false;
    detail += "N=" + std::to_string(e.num_particles) + ": max LN " + num(e.max_particle_ln) + ", spread " +
              num(e.pair_asymmetry) + (e.stability.stable ? "" : " (unstable)") + (e.trajectory.truncated ? " (truncated)" : "") +
              (i + 1 < entries.size() ? "; " : "");
  }
  return {ok, detail};
}

Outcome property_suites() {
  const std::vector<testing::SuiteResult> suites{
      testing::gaussian_core_invariants(kGaussianCases, 1),
      testing::nu_tilde_suite(kNuTildeCases, 2),
      testing::closed_form_suite(kClosedFormDraws, 3),
      testing::wigner_normalization_suite(kWignerCases, 4),
  };
  bool ok = true;
  std::string detail;
  for (const auto& s : suites) {
    ok = ok && s.passed();
    detail += s.name + ": " + std::to_string(s.cases) + " cases, max error " + num(s.max_error) + " < " +
              num(s.tolerance) + (s.failures ? ", " + std::to_string(s.failures) + " invariant failures" : "") + "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome discrepancy_artifact(const std::filesystem::path& out) {
  const auto f = compute_discrepancies(design_point_config(), experiment_config());
  const std::string doc = discrepancy_report(f);
  const auto path = out / "discrepancy_report.md";
  write_text_file(path, doc);
  const bool sections = doc.find("pressure unit") != std::string::npos &&
                        doc.find("mass versus density") != std::string::npos &&
                        doc.find("Status:") != std::string::npos;
  const bool finding = std::abs(f.damping_pascal_reading / f.reference.design_damping - 1.0) < 0.05 &&
                       f.damping_millibar_reading > 10.0 * f.reference.design_damping;
  return {sections && finding && std::filesystem::exists(path),
          "written to " + path.string() + "; damping pascal/millibar reading vs reference: " +
              num(f.damping_pascal_reading / f.reference.design_damping) + " / " +
              num(f.damping_millibar_reading / f.reference.design_damping) + ", tau = " +
              num(f.coherence_pascal_reading * 1e6) + " us vs 14.816 us"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string out = "acceptance_out";
  std::vector<int> only;
  app.add_option("--out", out, "Directory for generated artifacts");
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  std::filesystem::create_directories(out);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"derivation fidelity", derivation_fidelity},
      {"coupling reproduction", coupling_reproduction},
      {"unitary suite", unitary_suite},
      {"oracle equivalence", oracle_equivalence},
      {"steady state", steady_state_criterion},
      {"entanglement threshold", entanglement_threshold},
      {"coupling sweep", coupling_sweep},
      {"squeezing", squeezing},
      {"dilution", dilution},
      {"property suites", property_suites},
      {"discrepancy report", [&] { return discrepancy_artifact(out); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %s (%.1f s): %s\n", o.passed ? "PASS" : "FAIL", id, criteria[i].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.passed ? 0 : 1;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 2;
}
