#pragma once

#include <string>

#include <json.hpp>

#include "freeprob/density.hpp"
#include "freeprob/infdiv.hpp"
#include "freeprob/measure.hpp"
#include "freeprob/rmt.hpp"

namespace freeprob {

using json = nlohmann::json;

// {"domain": "real"|"rplus"|"circle", "atoms": [{"x", "w"}],
//  "continuous": {"family", "params": {...}, "weight"} | {"grid", "density"}}
// Without "weight" a named family carries the mass the atoms leave over.
Measure measure_from_json(const json& j, const Config& cfg = default_config());
json measure_to_json(const Measure& m);

// Same format without the unit-mass constraint; a named part's "weight"
// defaults to 1. Optional "scale" multiplies the piece and "window": [lo, hi]
// (with "window_closed": [bool, bool]) restricts it. Arrays are summed.
LevyMeasure levy_from_json(const json& j, const Config& cfg = default_config());
json levy_to_json(const LevyMeasure& nu);

// {"alpha", "nu"}, {"a", "b", "nu"} and {"a", "nu"}
TripletAdd triplet_add_from_json(const json& j, const Config& cfg = default_config());
TripletRplus triplet_rplus_from_json(const json& j, const Config& cfg = default_config());
TripletCircle triplet_circle_from_json(const json& j, const Config& cfg = default_config());

json config_to_json(const Config& cfg);
// Applies the keys present in j on top of cfg.
Config config_from_json(const json& j, Config cfg = default_config());

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
void write_json_file(const std::string& path, const json& j);

// CSV with columns (point, density) or (theta, density) on the circle.
std::string density_csv(const DensityTable& t);
json density_sidecar(const DensityTable& t);
std::string empirical_csv(const EmpiricalCdf& e);

}  // namespace freeprob
