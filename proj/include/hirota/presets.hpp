#pragma once

// Figure parameter sets and JSON configuration.

#include <string>
#include <string_view>
#include <vector>

#include "hirota/inverse.hpp"
#include "json.hpp"

namespace hirota {

struct Preset {
  std::string name;
  Background bg;
  std::vector<DiscreteEigenpair> seeds;
  QuartetPolicy policy = QuartetPolicy::Strict;
  GridAxes grid;

  SolitonSpec spec() const { return expand_quartets(seeds, bg, policy); }
  // Every seed eigenvalue lies strictly in D+ (decaying soliton rather than a breather on or inside |z| = k0).
  bool localized() const { return policy == QuartetPolicy::Strict; }
};

const std::vector<std::string>& preset_names();

// Throws UnknownPreset.
Preset preset(std::string_view name);

// Config document: {"name", "sigma", "k0", "alpha", "beta", "Qplus", "Qminus"?, "seeds": [{"z", "C", "rank"?}],
// "policy"?: "strict" | "off_spectrum", "grid"?: {xmin, xmax, nx, tmin, tmax, nt}}.
// Complex numbers are [re, im]; 2x2 matrices [[c, c], [c, c]]. Throws BadConfig.
Preset preset_from_json(const nlohmann::json& doc);
nlohmann::json preset_to_json(const Preset& p);

nlohmann::json complex_to_json(cplx v);
cplx complex_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const CMat2& m);
CMat2 matrix_from_json(const nlohmann::json& j);

}  // namespace hirota
