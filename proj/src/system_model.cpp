#include "levcs/system_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "levcs/error.hpp"

namespace levcs {

using constants::boltzmann;
using constants::hbar;
using constants::pi;
using constants::speed_of_light;
using constants::vacuum_permittivity;

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput(what);
}

double clausius_mossotti(double refractive_index) {
  const double eps = refractive_index * refractive_index;
  return (eps - 1.0) / (eps + 2.0);
}

}  // namespace

void ParticleParams::validate() const {
  require(positive_finite(radius), "particle radius must be > 0");
  require(std::isfinite(refractive_index) && refractive_index > 1.0, "refractive index must be > 1");
  require(density.has_value() || mass.has_value(), "particle needs a density or a mass");
  if (density) require(positive_finite(*density), "particle density must be > 0");
  if (mass) require(positive_finite(*mass), "particle mass must be > 0");
  if (initial_occupation)
    require(std::isfinite(*initial_occupation) && *initial_occupation >= 0.0,
            "initial occupation must be >= 0");
  if (initial_temperature)
    require(std::isfinite(*initial_temperature) && *initial_temperature >= 0.0,
            "initial temperature must be >= 0");
}

double TweezerParams::effective_waist() const {
  if (waist_convention == WaistConvention::GeometricMean && waist_y) return std::sqrt(waist * *waist_y);
  return waist;
}

void TweezerParams::validate() const {
  require(positive_finite(power), "tweezer power must be > 0");
  require(positive_finite(wavelength), "tweezer wavelength must be > 0");
  require(positive_finite(waist), "tweezer waist must be > 0");
  if (waist_y) require(positive_finite(*waist_y), "tweezer y waist must be > 0");
  if (waist_convention == WaistConvention::GeometricMean)
    require(waist_y.has_value(), "geometric-mean waist convention needs waist_y");
  require(std::isfinite(polarization_angle) && polarization_angle >= 0.0 &&
              polarization_angle <= pi / 2.0 + 1e-12,
          "polarization angle must lie in [0, pi/2]");
}

void CavityParams::validate() const {
  require(positive_finite(length), "cavity length must be > 0");
  require(positive_finite(waist), "cavity waist must be > 0");
  require(std::isfinite(linewidth) && linewidth >= 0.0, "cavity linewidth must be >= 0");
  require(std::isfinite(detuning), "cavity detuning must be finite");
  if (wavelength) require(positive_finite(*wavelength), "cavity wavelength must be > 0");
}

void EnvironmentParams::validate() const {
  require(std::isfinite(pressure) && pressure >= 0.0, "gas pressure must be >= 0");
  require(std::isfinite(temperature) && temperature >= 0.0, "gas temperature must be >= 0");
  require(std::isfinite(gas_molecule_mass) && gas_molecule_mass > 0.0, "gas molecule mass must be > 0");
}

void SystemConfig::validate() const {
  require(!particles.empty(), "system needs at least one particle");
  for (const auto& site : particles) {
    site.particle.validate();
    site.tweezer.validate();
  }
  cavity.validate();
  environment.validate();
}

double particle_volume(double radius) { return 4.0 / 3.0 * pi * radius * radius * radius; }

double resolved_mass(const ParticleParams& p) {
  if (p.mass) return *p.mass;
  if (p.density) return *p.density * particle_volume(p.radius);
  throw InvalidInput("particle mass cannot be resolved");
}

std::optional<std::string> mass_consistency_warning(const ParticleParams& p) {
  if (!p.mass || !p.density) return std::nullopt;
  const double implied = *p.density * particle_volume(p.radius);
  if (std::abs(implied - *p.mass) <= 0.01 * *p.mass) return std::nullopt;
  std::ostringstream msg;
  msg << "stated mass " << *p.mass << " kg used; density implies " << implied << " kg";
  return msg.str();
}

double polarizability(const ParticleParams& p) {
  return 4.0 * pi * vacuum_permittivity * p.radius * p.radius * p.radius *
         clausius_mossotti(p.refractive_index);
}

TrapFrequencies trap_frequencies(const ParticleParams& p, const TweezerParams& t) {
  const double m = resolved_mass(p);
  if (!(m > 0.0)) throw InvalidInput("trap_frequencies: zero mass");
  const double alpha = polarizability(p);
  const double w0 = t.effective_waist();
  const double zr = t.wavenumber() * w0 * w0 / 2.0;
  const double denom = pi * vacuum_permittivity * speed_of_light * m;
  TrapFrequencies out;
  out.x = std::sqrt(4.0 * alpha * t.power / (denom * std::pow(w0, 4)));
  out.y = out.x;
  out.z = std::sqrt(2.0 * alpha * t.power / (denom * w0 * w0 * zr * zr));
  return out;
}

double zero_point_fluctuation(const ParticleParams& p, double omega) {
  if (!(omega > 0.0)) throw InvalidInput("zero_point_fluctuation: omega must be > 0");
  return std::sqrt(hbar / (2.0 * resolved_mass(p) * omega));
}

double tweezer_field_amplitude(const TweezerParams& t) {
  const double w0 = t.effective_waist();
  return std::sqrt(4.0 * t.power / (w0 * w0 * pi * vacuum_permittivity * speed_of_light));
}

double cavity_mode_volume(const CavityParams& c) { return pi * c.waist * c.waist * c.length / 4.0; }

double cavity_wavelength(const CavityParams& c, const TweezerParams& t) {
  return c.wavelength.value_or(t.wavelength);
}

double coupling_strength(const ParticleParams& p, const TweezerParams& t, const CavityParams& c,
                         double omega) {
  const double k_c = constants::two_pi / cavity_wavelength(c, t);
  const double omega_c = speed_of_light * k_c;
  const double eps_c = std::sqrt(hbar * omega_c / (2.0 * vacuum_permittivity * cavity_mode_volume(c)));
  const double eps_t = tweezer_field_amplitude(t);
  const double g_bare = polarizability(p) * eps_t * eps_c / (2.0 * hbar);
  return zero_point_fluctuation(p, omega) * k_c * g_bare * std::sin(t.polarization_angle);
}

double gas_damping(const ParticleParams& p, const EnvironmentParams& e) {
  if (e.pressure == 0.0) return 0.0;
  if (!(e.temperature > 0.0)) throw InvalidInput("gas_damping: gas temperature must be > 0");
  const double v_gas = std::sqrt(3.0 * boltzmann * e.temperature / e.gas_molecule_mass);
  return 15.8 * p.radius * p.radius * e.pressure / (resolved_mass(p) * v_gas);
}

double recoil_rate(const ParticleParams& p, const TweezerParams& t, double omega) {
  if (!(omega > 0.0)) throw InvalidInput("recoil_rate: omega must be > 0");
  const double w0 = t.effective_waist();
  const double intensity = 2.0 * t.power / (pi * w0 * w0);
  const double alpha = polarizability(p);
  const double cross_section =
      alpha * alpha * std::pow(t.wavenumber(), 4) / (6.0 * pi * vacuum_permittivity * vacuum_permittivity);
  const double p_scatt = intensity * cross_section;
  return 0.2 * p_scatt / (resolved_mass(p) * speed_of_light * speed_of_light) * t.angular_frequency() / omega;
}

ThermalRates thermal_rates(const ParticleParams& p, const TweezerParams& t,
                           const EnvironmentParams& e, double omega) {
  if (!(omega > 0.0)) throw InvalidInput("thermal_rates: omega must be > 0");
  ThermalRates out;
  out.thermal_occupation = boltzmann * e.temperature / (hbar * omega);
  out.gas_decoherence = gas_damping(p, e) * out.thermal_occupation;
  out.recoil = recoil_rate(p, t, omega);
  const double total = out.gas_decoherence + out.recoil;
  out.coherence_time = total > 0.0 ? 1.0 / total : std::numeric_limits<double>::infinity();
  return out;
}

double bose_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) throw InvalidInput("bose_occupation: omega must be > 0");
  if (!(temperature >= 0.0)) throw InvalidInput("bose_occupation: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(hbar * omega / (boltzmann * temperature));
}

double bose_temperature(double omega, double occupation) {
  if (!(omega > 0.0)) throw InvalidInput("bose_temperature: omega must be > 0");
  if (!(occupation >= 0.0)) throw InvalidInput("bose_temperature: occupation must be >= 0");
  if (occupation == 0.0) return 0.0;
  return hbar * omega / (boltzmann * std::log1p(1.0 / occupation));
}

ClosedFormRates closed_form_rates(const ClosedFormInputs& in) {
  const double c = speed_of_light;
  const double cm = clausius_mossotti(in.refractive_index);
  const double omega_c = constants::two_pi * c / in.cavity_wavelength;
  const double k_t = constants::two_pi / in.tweezer_wavelength;

  ClosedFormRates out;
  out.coupling = std::pow(12.0 / pi, 0.25) * std::pow(cm, 0.75) * std::pow(in.power, 0.25) *
                 std::pow(in.radius, 1.5) * std::pow(omega_c, 1.5) /
                 (std::sqrt(in.cavity_length) * std::pow(c, 1.25) * in.cavity_waist) /
                 std::pow(in.density, 0.25);
  out.omega = std::sqrt(12.0 / pi) * std::sqrt(cm) * std::sqrt(in.power) / (in.waist * in.waist) /
              std::sqrt(in.density * c);
  const double n_gas = boltzmann * in.gas_temperature / (hbar * out.omega);
  out.gas_decoherence = 79.0 * std::sqrt(3.0) / (20.0 * pi) * n_gas * in.pressure /
                        (in.density * std::sqrt(boltzmann * in.gas_temperature / in.gas_molecule_mass)) /
                        in.radius;
  out.recoil = 2.0 * std::sqrt(3.0) / (15.0 * std::sqrt(pi)) * std::pow(cm, 1.5) * std::sqrt(in.power) *
               std::pow(in.radius, 3) * std::pow(k_t, 5) / std::sqrt(in.density * c);
  out.coherence_time = 1.0 / (out.gas_decoherence + out.recoil);
  return out;
}

double waist_for_target_frequency(double target_omega, double power, double density,
                                  double refractive_index) {
  if (!(target_omega > 0.0)) throw InvalidInput("target frequency must be > 0");
  if (!(power > 0.0) || !(density > 0.0)) throw InvalidInput("power and density must be > 0");
  return std::pow(12.0 / pi, 0.25) * std::pow(clausius_mossotti(refractive_index), 0.25) *
         std::pow(power, 0.25) / std::pow(density * speed_of_light, 0.25) / std::sqrt(target_omega);
}

namespace {

FreeFieldCheck free_field(const TweezerParams& t, double x_zpf, double x_rms) {
  FreeFieldCheck out;
  out.k_x_zpf = t.wavenumber() * x_zpf;
  out.k_x_thermal = t.wavenumber() * x_rms;
  out.negligible = out.k_x_zpf < kFreeFieldThreshold && out.k_x_thermal < kFreeFieldThreshold;
  return out;
}

}  // namespace

FreeFieldCheck free_field_check_temperature(const ParticleParams& p, const TweezerParams& t,
                                            double omega, double temperature) {
  if (!(temperature >= 0.0)) throw InvalidInput("free_field_check: temperature must be >= 0");
  const double m = resolved_mass(p);
  return free_field(t, zero_point_fluctuation(p, omega),
                    std::sqrt(boltzmann * temperature / (m * omega * omega)));
}

FreeFieldCheck free_field_check_occupation(const ParticleParams& p, const TweezerParams& t,
                                           double omega, double occupation) {
  if (!(occupation >= 0.0)) throw InvalidInput("free_field_check: occupation must be >= 0");
  const double x_zpf = zero_point_fluctuation(p, omega);
  return free_field(t, x_zpf, x_zpf * std::sqrt(2.0 * occupation + 1.0));
}

DerivedQuantities derive(const SystemConfig& config) {
  config.validate();
  DerivedQuantities out;
  out.linewidth = config.cavity.linewidth;
  out.detuning = config.cavity.detuning;
  for (std::size_t j = 0; j < config.particles.size(); ++j) {
    const auto& [p, t] = config.particles[j];
    const std::string tag = "particle " + std::to_string(j + 1) + ": ";
    if (auto w = mass_consistency_warning(p)) out.warnings.push_back(tag + *w);

    ParticleDerived d;
    d.mass = resolved_mass(p);
    d.polarizability = polarizability(p);
    d.trap = trap_frequencies(p, t);
    d.omega = d.trap.x;
    d.x_zpf = zero_point_fluctuation(p, d.omega);
    d.coupling = coupling_strength(p, t, config.cavity, d.omega);
    d.gas_damping = gas_damping(p, config.environment);
    const auto rates = thermal_rates(p, t, config.environment, d.omega);
    d.thermal_occupation = rates.thermal_occupation;
    d.gas_decoherence = rates.gas_decoherence;
    d.recoil = rates.recoil;
    d.coherence_time = rates.coherence_time;

    if (p.initial_occupation) {
      d.initial_occupation = *p.initial_occupation;
      if (p.initial_temperature) {
        const double from_t = bose_occupation(d.omega, *p.initial_temperature);
        if (std::abs(from_t - d.initial_occupation) > 0.1 * std::max(d.initial_occupation, 1e-3)) {
          std::ostringstream msg;
          msg << "initial occupation " << d.initial_occupation << " used; initial temperature implies "
              << from_t;
          out.warnings.push_back(tag + msg.str());
        }
      }
    } else if (p.initial_temperature) {
      d.initial_occupation = bose_occupation(d.omega, *p.initial_temperature);
    }
    out.particles.push_back(d);
  }
  return out;
}

nlohmann::json to_json(const DerivedQuantities& d) {
  nlohmann::json j;
  j["linewidth_rad_s"] = d.linewidth;
  j["detuning_rad_s"] = d.detuning;
  j["num_particles"] = d.particles.size();
  for (std::size_t k = 0; k < d.particles.size(); ++k) {
    const auto& p = d.particles[k];
    const std::string pre = "p" + std::to_string(k + 1) + ".";
    j[pre + "mass_kg"] = p.mass;
    j[pre + "polarizability_F_m2"] = p.polarizability;
    j[pre + "omega_x_rad_s"] = p.trap.x;
    j[pre + "omega_y_rad_s"] = p.trap.y;
    j[pre + "omega_z_rad_s"] = p.trap.z;
    j[pre + "omega_x_kHz"] = p.trap.x / constants::two_pi / 1e3;
    j[pre + "x_zpf_m"] = p.x_zpf;
    j[pre + "coupling_rad_s"] = p.coupling;
    j[pre + "coupling_kHz"] = p.coupling / constants::two_pi / 1e3;
    j[pre + "gas_damping_rad_s"] = p.gas_damping;
    j[pre + "thermal_occupation"] = p.thermal_occupation;
    j[pre + "gas_decoherence_rad_s"] = p.gas_decoherence;
    j[pre + "recoil_rate_rad_s"] = p.recoil;
    j[pre + "coherence_time_s"] = p.coherence_time;
    j[pre + "initial_occupation"] = p.initial_occupation;
  }
  j["warnings"] = d.warnings;
  return j;
}

ModelRates model_rates(const DerivedQuantities& d) {
  ModelRates r;
  r.linewidth = d.linewidth;
  r.detuning = d.detuning;
  for (const auto& p : d.particles)
    r.particles.push_back({p.omega, p.coupling, p.gas_damping, p.thermal_occupation, p.initial_occupation});
  return r;
}

LinearDynamics build_linear_dynamics(const ModelRates& rates) {
  const std::size_t n = rates.particles.size();
  if (n == 0) throw InvalidInput("build_linear_dynamics: at least one particle required");
  if (!(rates.linewidth >= 0.0) || !std::isfinite(rates.linewidth) || !std::isfinite(rates.detuning))
    throw InvalidInput("build_linear_dynamics: invalid cavity rates");
  const auto dim = static_cast<Eigen::Index>(2 * (n + 1));
  LinearDynamics out{Matrix::Zero(dim, dim), Matrix::Zero(dim, dim)};
  Matrix& a = out.drift;
  Matrix& d = out.noise;
  const double kappa = rates.linewidth;

  a(0, 0) = -kappa / 2.0;
  a(0, 1) = rates.detuning;
  a(1, 0) = -rates.detuning;
  a(1, 1) = -kappa / 2.0;
  d(0, 0) = kappa;
  d(1, 1) = kappa;

  for (std::size_t j = 0; j < n; ++j) {
    const auto& p = rates.particles[j];
    if (!std::isfinite(p.omega) || !std::isfinite(p.coupling) || !(p.damping >= 0.0) ||
        !(p.bath_occupation >= 0.0) || !std::isfinite(p.damping) || !std::isfinite(p.bath_occupation))
      throw InvalidInput("build_linear_dynamics: invalid particle rates");
    const auto x = static_cast<Eigen::Index>(2 * (j + 1));
    a(1, x) = -2.0 * p.coupling;
    a(x, x + 1) = p.omega;
    a(x + 1, x) = -p.omega;
    a(x + 1, x + 1) = -p.damping;
    a(x + 1, 0) = -2.0 * p.coupling;
    d(x + 1, x + 1) = 2.0 * p.damping * (2.0 * p.bath_occupation + 1.0);
  }
  return out;
}

LinearDynamics build_linear_dynamics(const SystemConfig& config) {
  return build_linear_dynamics(model_rates(derive(config)));
}

GaussianState initial_state(const ModelRates& rates) {
  if (rates.particles.empty()) throw InvalidInput("initial_state: at least one particle required");
  std::vector<double> occ{0.0};
  for (const auto& p : rates.particles) occ.push_back(p.initial_occupation);
  return GaussianState::thermal(occ);
}

GaussianState initial_state(const SystemConfig& config) { return initial_state(model_rates(derive(config))); }

}  // namespace levcs
