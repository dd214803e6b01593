#pragma once

// Physical parameters of N coherently scattering particles in one cavity,
// their derived rates, and the linear dynamics (A, D) of the quadratures.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "levcs/constants.hpp"
#include "levcs/gaussian_state.hpp"

namespace levcs {

inline constexpr double kDefaultRefractiveIndex = 1.45;  // silica
inline constexpr double kDefaultGasMoleculeMass = 28.97 * constants::atomic_mass_unit;  // air
inline constexpr double kFreeFieldThreshold = 0.05;

struct ParticleParams {
  double radius = 0.0;            // m
  std::optional<double> density;  // kg/m^3
  std::optional<double> mass;     // kg, authoritative when present
  double refractive_index = kDefaultRefractiveIndex;
  std::optional<double> initial_occupation;
  std::optional<double> initial_temperature;  // K

  void validate() const;
  bool operator==(const ParticleParams&) const = default;
};

enum class WaistConvention { XAxis, GeometricMean };

struct TweezerParams {
  double power = 0.0;       // W
  double wavelength = 0.0;  // m
  double waist = 0.0;       // m, x-axis waist
  std::optional<double> waist_y;
  WaistConvention waist_convention = WaistConvention::XAxis;
  double polarization_angle = constants::pi / 2.0;  // rad

  /// The single waist entering the trap-frequency formula.
  double effective_waist() const;
  double wavenumber() const { return constants::two_pi / wavelength; }
  double angular_frequency() const { return constants::speed_of_light * wavenumber(); }
  void validate() const;
  bool operator==(const TweezerParams&) const = default;
};

struct CavityParams {
  double length = 0.0;     // m
  double waist = 0.0;      // m
  double linewidth = 0.0;  // kappa, rad/s
  double detuning = 0.0;   // Delta = omega_c - omega_t, rad/s
  std::optional<double> wavelength;  // defaults to the tweezer wavelength

  void validate() const;
  bool operator==(const CavityParams&) const = default;
};

struct EnvironmentParams {
  double pressure = 0.0;     // Pa
  double temperature = 0.0;  // K
  double gas_molecule_mass = kDefaultGasMoleculeMass;

  void validate() const;
  bool operator==(const EnvironmentParams&) const = default;
};

struct ParticleSite {
  ParticleParams particle;
  TweezerParams tweezer;
  bool operator==(const ParticleSite&) const = default;
};

struct SystemConfig {
  std::vector<ParticleSite> particles;
  CavityParams cavity;
  EnvironmentParams environment;

  std::size_t num_particles() const { return particles.size(); }
  void validate() const;
  bool operator==(const SystemConfig&) const = default;
};

// --- constituent formulas -------------------------------------------------

double particle_volume(double radius);
double resolved_mass(const ParticleParams& p);

/// Set when both mass and density are given and disagree by more than 1%.
std::optional<std::string> mass_consistency_warning(const ParticleParams& p);

/// alpha = 4 pi eps0 R^3 (eps - 1) / (eps + 2), eps = n_R^2.
double polarizability(const ParticleParams& p);

struct TrapFrequencies {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

TrapFrequencies trap_frequencies(const ParticleParams& p, const TweezerParams& t);

double zero_point_fluctuation(const ParticleParams& p, double omega);

/// Tweezer field amplitude sqrt(4 P / (w0^2 pi eps0 c)).
double tweezer_field_amplitude(const TweezerParams& t);

/// Gaussian standing-wave mode volume pi w0c^2 L / 4.
double cavity_mode_volume(const CavityParams& c);
double cavity_wavelength(const CavityParams& c, const TweezerParams& t);

/// g = x_zpf k_c (alpha eps_t eps_c / 2 hbar) sin(theta).
double coupling_strength(const ParticleParams& p, const TweezerParams& t, const CavityParams& c,
                         double omega);

/// gamma = 15.8 R^2 p / (m v_gas), v_gas = sqrt(3 k_B T / m_gas).
double gas_damping(const ParticleParams& p, const EnvironmentParams& e);

/// Gamma_recoil = (1/5) (P_scatt / m c^2) (omega_t / omega).
double recoil_rate(const ParticleParams& p, const TweezerParams& t, double omega);

struct ThermalRates {
  double thermal_occupation = 0.0;  // high-temperature k_B T / hbar omega
  double gas_decoherence = 0.0;     // gamma * n_th
  double recoil = 0.0;
  double coherence_time = 0.0;      // 1 / (Gamma_gas + Gamma_recoil)
};

ThermalRates thermal_rates(const ParticleParams& p, const TweezerParams& t,
                           const EnvironmentParams& e, double omega);

/// Exact Bose-Einstein occupation 1 / (exp(hbar omega / k_B T) - 1).
double bose_occupation(double omega, double temperature);
double bose_temperature(double omega, double occupation);

// --- closed forms of the design study --------------------------------------

struct ClosedFormInputs {
  double density = 2200.0;
  double radius = 0.0;
  double power = 0.0;
  double waist = 0.0;  // tweezer waist, only enters omega
  double refractive_index = kDefaultRefractiveIndex;
  double tweezer_wavelength = 0.0;
  double cavity_wavelength = 0.0;
  double cavity_length = 0.0;
  double cavity_waist = 0.0;
  double pressure = 0.0;
  double gas_temperature = 0.0;
  double gas_molecule_mass = kDefaultGasMoleculeMass;
};

struct ClosedFormRates {
  double coupling = 0.0;
  double omega = 0.0;
  double gas_decoherence = 0.0;
  double recoil = 0.0;
  double coherence_time = 0.0;
};

/// Direct evaluation of the four density/radius/power closed forms
/// (theta = pi/2, mass from density, n_gas identified with n_th).
ClosedFormRates closed_form_rates(const ClosedFormInputs& in);

/// Tweezer waist that pins omega(P_t, w0) to `target_omega`.
double waist_for_target_frequency(double target_omega, double power, double density,
                                  double refractive_index);

struct FreeFieldCheck {
  double k_x_zpf = 0.0;      // k_t * x_zpf
  double k_x_thermal = 0.0;  // k_t * sqrt(<x^2>)
  bool negligible = false;   // both below kFreeFieldThreshold
};

/// <x^2> from equipartition k_B T / (m omega^2).
FreeFieldCheck free_field_check_temperature(const ParticleParams& p, const TweezerParams& t,
                                            double omega, double temperature);
/// <x^2> = x_zpf^2 (2 n + 1).
FreeFieldCheck free_field_check_occupation(const ParticleParams& p, const TweezerParams& t,
                                           double omega, double occupation);

// --- derived quantities and dynamics ----------------------------------------

struct ParticleDerived {
  double mass = 0.0;
  double polarizability = 0.0;
  TrapFrequencies trap;
  double omega = 0.0;  // the cavity-coupled x frequency
  double x_zpf = 0.0;
  double coupling = 0.0;
  double gas_damping = 0.0;
  double thermal_occupation = 0.0;
  double gas_decoherence = 0.0;
  double recoil = 0.0;
  double coherence_time = 0.0;
  double initial_occupation = 0.0;
};

struct DerivedQuantities {
  std::vector<ParticleDerived> particles;
  double linewidth = 0.0;
  double detuning = 0.0;
  std::vector<std::string> warnings;
};

DerivedQuantities derive(const SystemConfig& config);
nlohmann::json to_json(const DerivedQuantities& d);

/// Rates entering the Langevin equations of one particle.
struct ParticleRates {
  double omega = 0.0;
  double coupling = 0.0;
  double damping = 0.0;
  double bath_occupation = 0.0;
  double initial_occupation = 0.0;
  bool operator==(const ParticleRates&) const = default;
};

struct ModelRates {
  double linewidth = 0.0;
  double detuning = 0.0;
  std::vector<ParticleRates> particles;
  bool operator==(const ModelRates&) const = default;
};

ModelRates model_rates(const DerivedQuantities& d);

/// Drift matrix A and noise matrix D of dX/dt = A X + N, dV/dt = A V + V A^T + D.
struct LinearDynamics {
  Matrix drift;  // A
  Matrix noise;  // D, diagonal and nonnegative

  std::size_t num_modes() const { return static_cast<std::size_t>(drift.rows() / 2); }
};

LinearDynamics build_linear_dynamics(const ModelRates& rates);
LinearDynamics build_linear_dynamics(const SystemConfig& config);

/// Cavity vacuum times particle thermal states.
GaussianState initial_state(const ModelRates& rates);
GaussianState initial_state(const SystemConfig& config);

}  // namespace levcs
