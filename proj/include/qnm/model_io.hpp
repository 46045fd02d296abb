#pragma once

#include <string>

#include "qnm/model.hpp"

namespace qnm {

/// Parses a model document:
///   {"family": "Wave"|"KleinGordon", "a": 1.0,
///    "segments": [{"x_left":0, "x_right":1, "rho":4}],
///    "point_masses": [{"position":1, "mass":10}]}
/// Unknown keys anywhere are rejected (ParseError); the result is validated.
DensityProfile parse_model(const std::string& json_text);

DensityProfile load_model(const std::string& path);

/// Canonical JSON text for the model; parse_model(serialize_model(m)) == m.
std::string serialize_model(const DensityProfile& model);

std::string to_string(Family family);

}  // namespace qnm
