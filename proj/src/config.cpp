#include "levcs/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "levcs/error.hpp"
#include "levcs/units.hpp"

namespace levcs {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw InvalidInput(where + ": unknown field '" + key + "'");
}

double required(const json& j, const char* key, Dimension dim, const std::string& where) {
  if (!j.contains(key)) throw InvalidInput(where + ": missing field '" + key + "'");
  return parse_quantity(j.at(key), dim);
}

std::optional<double> optional_field(const json& j, const char* key, Dimension dim) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return parse_quantity(j.at(key), dim);
}

ParticleParams particle_from_json(const json& j) {
  reject_unknown(j, {"radius", "density", "mass", "refractive_index", "initial_occupation", "initial_temperature"},
                 "particle");
  ParticleParams p;
  p.radius = required(j, "radius", Dimension::Length, "particle");
  p.density = optional_field(j, "density", Dimension::Density);
  p.mass = optional_field(j, "mass", Dimension::Mass);
  if (auto n = optional_field(j, "refractive_index", Dimension::Dimensionless)) p.refractive_index = *n;
  p.initial_occupation = optional_field(j, "initial_occupation", Dimension::Dimensionless);
  p.initial_temperature = optional_field(j, "initial_temperature", Dimension::Temperature);
  return p;
}

json to_json(const ParticleParams& p) {
  json j;
  j["radius"] = quantity_json(p.radius, Dimension::Length);
  if (p.density) j["density"] = quantity_json(*p.density, Dimension::Density);
  if (p.mass) j["mass"] = quantity_json(*p.mass, Dimension::Mass);
  j["refractive_index"] = p.refractive_index;
  if (p.initial_occupation) j["initial_occupation"] = *p.initial_occupation;
  if (p.initial_temperature) j["initial_temperature"] = quantity_json(*p.initial_temperature, Dimension::Temperature);
  return j;
}

TweezerParams tweezer_from_json(const json& j) {
  reject_unknown(j, {"power", "wavelength", "waist", "waist_y", "waist_convention", "polarization_angle"},
                 "tweezer");
  TweezerParams t;
  t.power = required(j, "power", Dimension::Power, "tweezer");
  t.wavelength = required(j, "wavelength", Dimension::Length, "tweezer");
  t.waist = required(j, "waist", Dimension::Length, "tweezer");
  t.waist_y = optional_field(j, "waist_y", Dimension::Length);
  if (j.contains("waist_convention")) {
    const auto conv = j.at("waist_convention").get<std::string>();
    if (conv == "x") t.waist_convention = WaistConvention::XAxis;
    else if (conv == "geometric_mean") t.waist_convention = WaistConvention::GeometricMean;
    else throw InvalidInput("tweezer: waist_convention must be 'x' or 'geometric_mean'");
  }
  if (auto theta = optional_field(j, "polarization_angle", Dimension::Angle)) t.polarization_angle = *theta;
  return t;
}

json to_json(const TweezerParams& t) {
  json j;
  j["power"] = quantity_json(t.power, Dimension::Power);
  j["wavelength"] = quantity_json(t.wavelength, Dimension::Length);
  j["waist"] = quantity_json(t.waist, Dimension::Length);
  if (t.waist_y) j["waist_y"] = quantity_json(*t.waist_y, Dimension::Length);
  j["waist_convention"] = t.waist_convention == WaistConvention::XAxis ? "x" : "geometric_mean";
  j["polarization_angle"] = quantity_json(t.polarization_angle, Dimension::Angle);
  return j;
}

CavityParams cavity_from_json(const json& j) {
  reject_unknown(j, {"length", "waist", "linewidth", "detuning", "wavelength"}, "cavity");
  CavityParams c;
  c.length = required(j, "length", Dimension::Length, "cavity");
  c.waist = required(j, "waist", Dimension::Length, "cavity");
  c.linewidth = required(j, "linewidth", Dimension::AngularRate, "cavity");
  c.detuning = required(j, "detuning", Dimension::AngularRate, "cavity");
  c.wavelength = optional_field(j, "wavelength", Dimension::Length);
  return c;
}

json to_json(const CavityParams& c) {
  json j;
  j["length"] = quantity_json(c.length, Dimension::Length);
  j["waist"] = quantity_json(c.waist, Dimension::Length);
  j["linewidth"] = quantity_json(c.linewidth, Dimension::AngularRate);
  j["detuning"] = quantity_json(c.detuning, Dimension::AngularRate);
  if (c.wavelength) j["wavelength"] = quantity_json(*c.wavelength, Dimension::Length);
  return j;
}

EnvironmentParams environment_from_json(const json& j) {
  reject_unknown(j, {"pressure", "temperature", "gas_molecule_mass"}, "environment");
  EnvironmentParams e;
  e.pressure = required(j, "pressure", Dimension::Pressure, "environment");
  e.temperature = required(j, "temperature", Dimension::Temperature, "environment");
  if (auto m = optional_field(j, "gas_molecule_mass", Dimension::Mass)) e.gas_molecule_mass = *m;
  return e;
}

json to_json(const EnvironmentParams& e) {
  json j;
  j["pressure"] = quantity_json(e.pressure, Dimension::Pressure);
  j["temperature"] = quantity_json(e.temperature, Dimension::Temperature);
  j["gas_molecule_mass"] = quantity_json(e.gas_molecule_mass, Dimension::Mass);
  return j;
}

}  // namespace

SystemConfig system_config_from_json(const json& j) {
  try {
    reject_unknown(j, {"particle", "tweezer", "num_particles", "particles", "cavity", "environment", "scenario"},
                   "config");
    SystemConfig config;
    if (j.contains("particles")) {
      if (j.contains("particle") || j.contains("tweezer") || j.contains("num_particles"))
        throw InvalidInput("config: give either 'particles' or 'particle'/'tweezer'/'num_particles', not both");
      const auto& arr = j.at("particles");
      if (!arr.is_array() || arr.empty()) throw InvalidInput("config: 'particles' must be a nonempty array");
      for (const auto& site : arr) {
        reject_unknown(site, {"particle", "tweezer"}, "particles[]");
        config.particles.push_back({particle_from_json(site.at("particle")), tweezer_from_json(site.at("tweezer"))});
      }
    } else {
      if (!j.contains("particle") || !j.contains("tweezer"))
        throw InvalidInput("config: missing 'particle'/'tweezer' (or 'particles')");
      const auto n = j.value("num_particles", 2);
      if (n < 1) throw InvalidInput("config: num_particles must be >= 1");
      const ParticleSite site{particle_from_json(j.at("particle")), tweezer_from_json(j.at("tweezer"))};
      config.particles.assign(static_cast<std::size_t>(n), site);
    }
    if (!j.contains("cavity")) throw InvalidInput("config: missing 'cavity'");
    if (!j.contains("environment")) throw InvalidInput("config: missing 'environment'");
    config.cavity = cavity_from_json(j.at("cavity"));
    config.environment = environment_from_json(j.at("environment"));
    config.validate();
    return config;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

json to_json(const SystemConfig& config) {
  json j;
  j["particles"] = json::array();
  for (const auto& site : config.particles)
    j["particles"].push_back({{"particle", to_json(site.particle)}, {"tweezer", to_json(site.tweezer)}});
  j["cavity"] = to_json(config.cavity);
  j["environment"] = to_json(config.environment);
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("'" + path.string() + "': " + e.what());
  }
}

SystemConfig load_system_config(const std::filesystem::path& path) {
  return system_config_from_json(read_json_file(path));
}

bool RateOverrides::empty() const { return *this == RateOverrides{}; }

RateOverrides rate_overrides_from_json(const json& j) {
  reject_unknown(j, {"linewidth", "detuning", "coupling", "omega", "damping", "bath_occupation", "initial_occupation"},
                 "overrides");
  RateOverrides o;
  o.linewidth = optional_field(j, "linewidth", Dimension::AngularRate);
  o.detuning = optional_field(j, "detuning", Dimension::AngularRate);
  o.coupling = optional_field(j, "coupling", Dimension::AngularRate);
  o.omega = optional_field(j, "omega", Dimension::AngularRate);
  o.damping = optional_field(j, "damping", Dimension::AngularRate);
  o.bath_occupation = optional_field(j, "bath_occupation", Dimension::Dimensionless);
  o.initial_occupation = optional_field(j, "initial_occupation", Dimension::Dimensionless);
  return o;
}

json to_json(const RateOverrides& o) {
  json j = json::object();
  auto put = [&](const char* key, const std::optional<double>& v, Dimension dim) {
    if (v) j[key] = dim == Dimension::Dimensionless ? json(*v) : quantity_json(*v, dim);
  };
  put("linewidth", o.linewidth, Dimension::AngularRate);
  put("detuning", o.detuning, Dimension::AngularRate);
  put("coupling", o.coupling, Dimension::AngularRate);
  put("omega", o.omega, Dimension::AngularRate);
  put("damping", o.damping, Dimension::AngularRate);
  put("bath_occupation", o.bath_occupation, Dimension::Dimensionless);
  put("initial_occupation", o.initial_occupation, Dimension::Dimensionless);
  return j;
}

ModelRates apply_overrides(ModelRates rates, const RateOverrides& o) {
  auto check = [](const std::optional<double>& v, const char* name, bool allow_negative = false) {
    if (v && (!std::isfinite(*v) || (!allow_negative && *v < 0.0)))
      throw InvalidInput(std::string("override '") + name + "' is out of range");
  };
  check(o.linewidth, "linewidth");
  check(o.detuning, "detuning", true);
  check(o.coupling, "coupling", true);
  check(o.omega, "omega");
  check(o.damping, "damping");
  check(o.bath_occupation, "bath_occupation");
  check(o.initial_occupation, "initial_occupation");

  if (o.linewidth) rates.linewidth = *o.linewidth;
  if (o.detuning) rates.detuning = *o.detuning;
  for (auto& p : rates.particles) {
    if (o.coupling) p.coupling = *o.coupling;
    if (o.omega) p.omega = *o.omega;
    if (o.damping) p.damping = *o.damping;
    if (o.bath_occupation) p.bath_occupation = *o.bath_occupation;
    if (o.initial_occupation) p.initial_occupation = *o.initial_occupation;
  }
  return rates;
}

namespace {

CavityParams experiment_cavity() {
  CavityParams c;
  c.length = 10.7e-3;
  c.waist = 41.1e-6;
  c.linewidth = constants::two_pi * 193e3;
  c.detuning = constants::two_pi * 315e3;
  return c;
}

}  // namespace

SystemConfig experiment_config(std::size_t num_particles) {
  ParticleSite site;
  site.particle.radius = 71.5e-9;
  site.particle.mass = 2.83e-18;
  site.particle.density = 2200.0;
  site.particle.initial_occupation = 0.43;
  site.tweezer.power = 0.4;
  site.tweezer.wavelength = 1064e-9;
  site.tweezer.waist = 0.67e-6;
  site.tweezer.waist_y = 0.77e-6;

  SystemConfig config;
  config.particles.assign(num_particles, site);
  config.cavity = experiment_cavity();
  config.environment.pressure = 1e-6 * 100.0;  // 1e-6 mbar
  config.environment.temperature = 300.0;
  config.validate();
  return config;
}

SystemConfig design_point_config(std::size_t num_particles) {
  ParticleSite site;
  site.particle.radius = 90e-9;
  site.particle.density = 2200.0;
  site.particle.initial_occupation = 0.1;
  site.particle.initial_temperature = 6.1e-6;
  site.tweezer.power = 0.3475;
  site.tweezer.wavelength = 1064e-9;
  site.tweezer.waist = 0.61583e-6;

  SystemConfig config;
  config.particles.assign(num_particles, site);
  config.cavity = experiment_cavity();
  config.environment.pressure = 1e-6;  // pascals: the reading that reproduces the damping rate
  config.environment.temperature = 300.0;
  config.validate();
  return config;
}

}  // namespace levcs
