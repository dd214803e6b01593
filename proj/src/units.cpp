#include "levcs/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "levcs/constants.hpp"
#include "levcs/error.hpp"

namespace levcs {

namespace {

struct UnitEntry {
  Dimension dim;
  std::string_view name;
  double scale;
  double offset = 0.0;
};

constexpr double kTwoPi = constants::two_pi;

constexpr std::array kUnits = {
    UnitEntry{Dimension::Length, "m", 1.0},
    UnitEntry{Dimension::Length, "mm", 1e-3},
    UnitEntry{Dimension::Length, "um", 1e-6},
    UnitEntry{Dimension::Length, "nm", 1e-9},
    UnitEntry{Dimension::Length, "pm", 1e-12},
    UnitEntry{Dimension::Mass, "kg", 1.0},
    UnitEntry{Dimension::Mass, "g", 1e-3},
    UnitEntry{Dimension::Mass, "fg", 1e-18},
    UnitEntry{Dimension::Mass, "ag", 1e-21},
    UnitEntry{Dimension::Mass, "u", constants::atomic_mass_unit},
    UnitEntry{Dimension::Power, "W", 1.0},
    UnitEntry{Dimension::Power, "mW", 1e-3},
    UnitEntry{Dimension::Power, "uW", 1e-6},
    UnitEntry{Dimension::Density, "kg/m^3", 1.0},
    UnitEntry{Dimension::Density, "g/cm^3", 1e3},
    UnitEntry{Dimension::Pressure, "Pa", 1.0},
    UnitEntry{Dimension::Pressure, "mbar", 100.0},
    UnitEntry{Dimension::Pressure, "hPa", 100.0},
    UnitEntry{Dimension::Pressure, "Torr", 101325.0 / 760.0},
    UnitEntry{Dimension::Temperature, "K", 1.0},
    UnitEntry{Dimension::Temperature, "mK", 1e-3},
    UnitEntry{Dimension::Temperature, "uK", 1e-6},
    UnitEntry{Dimension::Temperature, "nK", 1e-9},
    UnitEntry{Dimension::Angle, "rad", 1.0},
    UnitEntry{Dimension::Angle, "deg", constants::pi / 180.0},
    UnitEntry{Dimension::AngularRate, "rad/s", 1.0},
    UnitEntry{Dimension::AngularRate, "2pi*uHz", kTwoPi * 1e-6},
    UnitEntry{Dimension::AngularRate, "2pi*mHz", kTwoPi * 1e-3},
    UnitEntry{Dimension::AngularRate, "2pi*Hz", kTwoPi},
    UnitEntry{Dimension::AngularRate, "2pi*kHz", kTwoPi * 1e3},
    UnitEntry{Dimension::AngularRate, "2pi*MHz", kTwoPi * 1e6},
    UnitEntry{Dimension::Time, "s", 1.0},
    UnitEntry{Dimension::Time, "ms", 1e-3},
    UnitEntry{Dimension::Time, "us", 1e-6},
    UnitEntry{Dimension::Time, "ns", 1e-9},
    UnitEntry{Dimension::Dimensionless, "", 1.0},
    UnitEntry{Dimension::Dimensionless, "1", 1.0},
};

std::string_view dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::Length: return "length";
    case Dimension::Mass: return "mass";
    case Dimension::Power: return "power";
    case Dimension::Density: return "density";
    case Dimension::Pressure: return "pressure";
    case Dimension::Temperature: return "temperature";
    case Dimension::Angle: return "angle";
    case Dimension::AngularRate: return "angular rate";
    case Dimension::Time: return "time";
    case Dimension::Dimensionless: return "dimensionless";
  }
  return "unknown";
}

}  // namespace

std::string_view si_unit(Dimension dim) {
  switch (dim) {
    case Dimension::Length: return "m";
    case Dimension::Mass: return "kg";
    case Dimension::Power: return "W";
    case Dimension::Density: return "kg/m^3";
    case Dimension::Pressure: return "Pa";
    case Dimension::Temperature: return "K";
    case Dimension::Angle: return "rad";
    case Dimension::AngularRate: return "rad/s";
    case Dimension::Time: return "s";
    case Dimension::Dimensionless: return "";
  }
  return "";
}

double to_si(double value, std::string_view unit, Dimension dim) {
  if (!std::isfinite(value)) throw InvalidInput("quantity value must be finite");
  for (const auto& entry : kUnits) {
    if (entry.dim == dim && entry.name == unit) return value * entry.scale + entry.offset;
  }
  throw InvalidInput("unknown " + std::string(dimension_name(dim)) + " unit '" + std::string(unit) + "'");
}

double parse_quantity(const nlohmann::json& j, Dimension dim) {
  if (j.is_number()) {
    if (dim != Dimension::Dimensionless)
      throw InvalidInput(std::string(dimension_name(dim)) + " quantity needs an explicit unit tag");
    return j.get<double>();
  }
  if (!j.is_object() || !j.contains("value") || !j.at("value").is_number())
    throw InvalidInput("expected a quantity object {\"value\": ..., \"unit\": ...}");
  const double value = j.at("value").get<double>();
  std::string unit;
  if (j.contains("unit")) {
    if (!j.at("unit").is_string()) throw InvalidInput("quantity unit must be a string");
    unit = j.at("unit").get<std::string>();
  } else if (dim != Dimension::Dimensionless) {
    throw InvalidInput(std::string(dimension_name(dim)) + " quantity needs an explicit unit tag");
  }
  return to_si(value, unit, dim);
}

nlohmann::json quantity_json(double si_value, Dimension dim) {
  return nlohmann::json{{"value", si_value}, {"unit", std::string(si_unit(dim))}};
}

double parse_quantity_text(std::string_view text, Dimension dim) {
  const auto colon = text.find(':');
  const std::string_view number = text.substr(0, colon);
  const std::string_view unit = colon == std::string_view::npos ? si_unit(dim) : text.substr(colon + 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc() || ptr != number.data() + number.size())
    throw InvalidInput("cannot parse number '" + std::string(number) + "'");
  return to_si(value, unit, dim);
}

}  // namespace levcs
