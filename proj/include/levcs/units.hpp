#pragma once

// Unit-tagged quantities of the form {"value": 400, "unit": "mW"}.

#include <string_view>

#include "json.hpp"

namespace levcs {

enum class Dimension {
  Length,
  Mass,
  Power,
  Density,
  Pressure,
  Temperature,
  Angle,
  AngularRate,  // rad/s; "2pi*kHz" etc. for cyclic frequencies
  Time,
  Dimensionless,
};

std::string_view si_unit(Dimension dim);

/// Converts `value` in `unit` to SI. Throws InvalidInput for units that do not
/// belong to `dim`.
double to_si(double value, std::string_view unit, Dimension dim);

/// Reads a unit-tagged quantity. Bare numbers are accepted only for
/// dimensionless fields.
double parse_quantity(const nlohmann::json& j, Dimension dim);

/// Canonical SI form, e.g. {"value": 0.4, "unit": "W"}.
nlohmann::json quantity_json(double si_value, Dimension dim);

/// Parses "193:2pi*kHz" or "0" (SI) as used on the command line.
double parse_quantity_text(std::string_view text, Dimension dim);

}  // namespace levcs
