#pragma once

// Reproduction status of the reference parameter sets: pressure-unit
// reading of the damping rate, experiment-set mass/density tension, coherence time.

#include <string>

#include "levcs/system_model.hpp"

namespace levcs {

struct ReferenceValues {
  double experiment_omega = constants::two_pi * 305e3;
  double experiment_x_zpf = 3.1e-12;
  double experiment_gas_decoherence = constants::two_pi * 16.1e3;
  double experiment_recoil = constants::two_pi * 6e3;
  double experiment_coherence_time = 7.6e-6;
  double design_omega = constants::two_pi * 305.26e3;
  double design_coupling = constants::two_pi * 109.8e3;
  double design_damping = constants::two_pi * 5.88e-6;
  double design_coherence_time = 14.816e-6;
  double design_initial_occupation = 0.1;
  double design_initial_temperature = 6.1e-6;
  double target_omega = constants::two_pi * 305.4e3;
  double design_waist = 0.616e-6;
  double free_field_thermal = 0.035;  // k_t sqrt(<x^2>) at 10 K
  double steady_total_information = 16.3;
  double steady_particle_information = 15.1;
};

struct DiscrepancyFindings {
  ReferenceValues reference;

  // damping under both readings of the numeral "1e-6" for the design pressure
  double damping_pascal_reading = 0.0;
  double damping_millibar_reading = 0.0;
  double coherence_pascal_reading = 0.0;
  double coherence_millibar_reading = 0.0;
  double gas_decoherence_pascal_reading = 0.0;
  double gas_decoherence_millibar_reading = 0.0;
  double design_recoil = 0.0;

  // experiment set: mass versus density
  double experiment_mass_stated = 0.0;
  double experiment_mass_implied = 0.0;
  double experiment_omega_stated_mass = 0.0;
  double experiment_omega_implied_mass = 0.0;
  double experiment_x_zpf = 0.0;
  double experiment_gas_decoherence = 0.0;
  double experiment_recoil = 0.0;
  double experiment_coherence_time = 0.0;

  // design point as derived
  double design_omega = 0.0;
  double design_coupling = 0.0;
  double design_bose_occupation = 0.0;  // from the reference initial temperature
  double waist_for_target = 0.0;
  double free_field_zpf = 0.0;
  double free_field_thermal = 0.0;

  // steady-state information (natural log), NaN if no steady state
  double steady_total_information = 0.0;
  double steady_particle_information = 0.0;
};

/// `design` must carry the pressure in the pascal reading.
DiscrepancyFindings compute_discrepancies(const SystemConfig& design, const SystemConfig& experiment,
                                          const ReferenceValues& reference = {});

/// Markdown document.
std::string discrepancy_report(const DiscrepancyFindings& f);

}  // namespace levcs
