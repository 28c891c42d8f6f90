#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sdsim/expr.hpp"

namespace sdsim {

struct Preset {
    std::string name;
    std::vector<std::pair<std::string, double>> overrides;
    std::string description;
};

// The built-in feedback-loop recommender bias model: 45 definitions, four
// stocks (bias distribution, recommendations, interactions, performance).
// Semantically identical to parsing models/frs.sdl.
ModelSpec build_frs_model();

// Constant definitions (name, default value) in model order.
std::vector<std::pair<std::string, double>> frs_constants();

// Stock initial values (name, value) in model order.
std::vector<std::pair<std::string, double>> frs_initial_stocks();

// Scenario presets: base, inductive-x2, user-x2, all-bias-x5,
// intervention-research, intervention-full, and the distribution-shape
// presets dist-exponential, dist-lognormal, dist-gamma2, dist-gamma4.
// Throws UnknownPreset for anything else.
Preset preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace sdsim
