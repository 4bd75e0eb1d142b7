#pragma once

#include <string>

#include "dtlab/measure.hpp"

namespace dtlab {

/// Parses a measure-spec document. Two top-level forms:
///   { "type": "mixture", "components": [
///       {"type":"dirac","at":[0.0,0.0],"mass":0.5},
///       {"type":"annulus_uniform","center":[0,0],"r_in":0.9,"r_out":1.0,"mass":0.5} ] }
///   { "type": "family", "name": "example3", "n_max": 200 }
/// Mixture components may also be "circle_uniform" (center, r, mass) and
/// weighted "family" entries (name, n_max, p, mass).
/// Throws std::invalid_argument with a line/path-anchored message.
AtomicMeasure parse_measure_spec(const std::string& json_text);

AtomicMeasure load_measure_spec(const std::string& path);

/// Compact JSON descriptor of a measure (for manifests and reports).
std::string measure_to_json(const AtomicMeasure& mu);

} // namespace dtlab
