#include "doctest.h"

#include <cmath>

#include "levcs/config.hpp"
#include "levcs/error.hpp"
#include "levcs/system_model.hpp"
#include "support.hpp"

using namespace levcs;
using constants::two_pi;

namespace {

// Optical potential U(x) = -(alpha / 4) E0^2 exp(-2 x^2 / w0^2) of a focused
// Gaussian beam; the trap frequency follows from its curvature.
double curvature_frequency(const ParticleParams& p, const TweezerParams& t) {
  const double e0 = tweezer_field_amplitude(t);
  const double alpha = polarizability(p);
  const double w0 = t.effective_waist();
  auto u = [&](double x) { return -0.25 * alpha * e0 * e0 * std::exp(-2.0 * x * x / (w0 * w0)); };
  const double h = 1e-3 * w0;
  const double curvature = (u(h) - 2.0 * u(0.0) + u(-h)) / (h * h);
  return std::sqrt(curvature / resolved_mass(p));
}

}  // namespace

TEST_CASE("trap frequency from the curvature of the optical potential") {
  const auto site = design_point_config().particles.front();
  const double omega = trap_frequencies(site.particle, site.tweezer).x;
  CHECK(omega == doctest::Approx(curvature_frequency(site.particle, site.tweezer)).epsilon(1e-5));

  const auto t1 = experiment_config().particles.front();
  CHECK(trap_frequencies(t1.particle, t1.tweezer).x ==
        doctest::Approx(curvature_frequency(t1.particle, t1.tweezer)).epsilon(1e-5));
}

TEST_CASE("derived parameter values of the built-in sets") {
  SUBCASE("experiment parameters with stated mass") {
    const auto d = derive(experiment_config());
    const auto& p = d.particles.front();
    // reference: omega = 2pi x 305 kHz, x_zpf = 3.1 pm
    CHECK(std::abs(p.omega / (two_pi * 305e3) - 1.0) < 0.01);
    CHECK(std::abs(p.x_zpf / 3.1e-12 - 1.0) < 0.03);
    CHECK(p.x_zpf == doctest::Approx(std::sqrt(constants::hbar / (2.0 * 2.83e-18 * p.omega))));
    CHECK(p.initial_occupation == doctest::Approx(0.43));
    CHECK_FALSE(d.warnings.empty());  // stated mass disagrees with the density
  }
  SUBCASE("design point") {
    const auto d = derive(design_point_config());
    const auto& p = d.particles.front();
    CHECK(std::abs(p.coupling / (two_pi * 109.8e3) - 1.0) < 0.10);
    CHECK(p.omega / two_pi == doctest::Approx(308627.66).epsilon(1e-6));
    CHECK(p.coupling / two_pi == doctest::Approx(111648.04).epsilon(1e-6));
    CHECK(p.gas_damping / two_pi == doctest::Approx(5.966e-6).epsilon(1e-3));
    CHECK(p.coherence_time == doctest::Approx(14.340e-6).epsilon(1e-4));
    CHECK(d.linewidth == doctest::Approx(two_pi * 193e3));
    CHECK(d.detuning == doctest::Approx(two_pi * 315e3));
    CHECK(p.initial_occupation == doctest::Approx(0.1));
  }
}

TEST_CASE("gas damping and its thermal occupation") {
  ParticleParams p;
  p.radius = 100e-9;
  p.density = 2000.0;
  EnvironmentParams e;
  e.pressure = 1e-3;
  e.temperature = 300.0;
  const double m = 2000.0 * 4.0 / 3.0 * constants::pi * 1e-21;
  const double v = std::sqrt(3.0 * constants::boltzmann * 300.0 / kDefaultGasMoleculeMass);
  CHECK(gas_damping(p, e) == doctest::Approx(15.8 * 1e-14 * 1e-3 / (m * v)));
  // damping is linear in pressure
  EnvironmentParams e2 = e;
  e2.pressure *= 100.0;
  CHECK(gas_damping(p, e2) == doctest::Approx(100.0 * gas_damping(p, e)));
  e.pressure = 0.0;
  CHECK(gas_damping(p, e) == 0.0);
}

TEST_CASE("Bose occupation and temperature are inverse") {
  const double omega = two_pi * 305e3;
  for (double n : {1e-4, 0.1, 0.43, 3.0, 1e4}) CHECK(bose_occupation(omega, bose_temperature(omega, n)) == doctest::Approx(n));
  // high-temperature limit k_B T / hbar omega - 1/2
  const double t = 300.0;
  CHECK(bose_occupation(omega, t) == doctest::Approx(constants::boltzmann * t / (constants::hbar * omega) - 0.5).epsilon(1e-9));
  CHECK(bose_occupation(omega, 0.0) == 0.0);
  CHECK_THROWS_AS(bose_occupation(-1.0, 1.0), InvalidInput);
}

TEST_CASE("closed forms vs constituent formulas") {
  const auto r = testing::closed_form_suite(100, 8675309);
  INFO("max relative error " << r.max_error);
  CHECK(r.passed());
}

TEST_CASE("waist for a target frequency pins omega") {
  const double target = two_pi * 305.4e3;
  const double w = waist_for_target_frequency(target, 0.3475, 2200.0, 1.45);
  ParticleParams p;
  p.radius = 90e-9;
  p.density = 2200.0;
  TweezerParams t;
  t.power = 0.3475;
  t.wavelength = 1064e-9;
  t.waist = w;
  CHECK(trap_frequencies(p, t).x == doctest::Approx(target).epsilon(1e-12));
  // omega does not depend on the radius at fixed density
  p.radius = 140e-9;
  CHECK(trap_frequencies(p, t).x == doctest::Approx(target).epsilon(1e-12));
}

TEST_CASE("free-field check") {
  const auto site = experiment_config().particles.front();
  const double omega = trap_frequencies(site.particle, site.tweezer).x;
  const auto ff = free_field_check_temperature(site.particle, site.tweezer, omega, 10.0);
  CHECK(ff.k_x_zpf == doctest::Approx(site.tweezer.wavenumber() * zero_point_fluctuation(site.particle, omega)));
  CHECK(ff.k_x_thermal < kFreeFieldThreshold);
  CHECK(ff.negligible);
  const auto by_n = free_field_check_occupation(site.particle, site.tweezer, omega, 0.0);
  CHECK(by_n.k_x_thermal == doctest::Approx(by_n.k_x_zpf));
}

TEST_CASE("initial occupation precedence") {
  SystemConfig c = design_point_config();
  auto& p = c.particles.front().particle;
  p.initial_occupation = 0.1;
  p.initial_temperature = 50e-6;
  const auto d = derive(c);
  CHECK(d.particles.front().initial_occupation == doctest::Approx(0.1));
  CHECK_FALSE(d.warnings.empty());

  p.initial_occupation.reset();
  const auto d2 = derive(c);
  CHECK(d2.particles.front().initial_occupation ==
        doctest::Approx(bose_occupation(d2.particles.front().omega, 50e-6)));
}

TEST_CASE("drift and noise matrices") {
  ModelRates r;
  r.linewidth = 3.0;
  r.detuning = 5.0;
  r.particles = {{7.0, 0.5, 0.2, 10.0, 0.0}, {11.0, 0.25, 0.1, 4.0, 0.0}};
  const auto dyn = build_linear_dynamics(r);
  const Matrix& a = dyn.drift;
  const Matrix& d = dyn.noise;
  REQUIRE(a.rows() == 6);
  CHECK(a(0, 0) == -1.5);
  CHECK(a(0, 1) == 5.0);
  CHECK(a(1, 0) == -5.0);
  CHECK(a(1, 1) == -1.5);
  CHECK(a(1, 2) == -1.0);
  CHECK(a(1, 4) == -0.5);
  CHECK(a(2, 3) == 7.0);
  CHECK(a(3, 2) == -7.0);
  CHECK(a(3, 3) == -0.2);
  CHECK(a(3, 0) == -1.0);
  CHECK(a(5, 0) == -0.5);
  CHECK(a(4, 5) == 11.0);
  CHECK(a(2, 2) == 0.0);
  CHECK(d(0, 0) == 3.0);
  CHECK(d(1, 1) == 3.0);
  CHECK(d(2, 2) == 0.0);
  CHECK(d(3, 3) == doctest::Approx(2.0 * 0.2 * 21.0));
  CHECK(d(5, 5) == doctest::Approx(2.0 * 0.1 * 9.0));
  CHECK((d - Matrix(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

  ModelRates bad = r;
  bad.particles[0].damping = -1.0;
  CHECK_THROWS_AS(build_linear_dynamics(bad), InvalidInput);
  bad.particles.clear();
  CHECK_THROWS_AS(build_linear_dynamics(bad), InvalidInput);
}

TEST_CASE("configuration validation") {
  SystemConfig c = design_point_config();
  c.particles.front().particle.radius = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = design_point_config();
  c.particles.front().particle.density.reset();
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = design_point_config();
  c.environment.temperature = -3.0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = design_point_config();
  c.particles.clear();
  CHECK_THROWS_AS(c.validate(), InvalidInput);
}
