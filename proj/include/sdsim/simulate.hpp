#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdsim/compile.hpp"
#include "sdsim/rng.hpp"

namespace sdsim {

using Overrides = std::vector<std::pair<std::string, double>>;

struct RunMeta {
    std::uint64_t seed = 1;
    NoiseMode mode = NoiseMode::Stochastic;
    double initial_time = 0.0;
    double final_time = 0.0;
    double dt = 1.0;
    double saveper = 1.0;
    Overrides overrides;
};

// One trajectory. names keeps definition order with control variables
// dropped; values[i] is the series for names[i], aligned with times.
struct RunResult {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;
    RunMeta meta;

    const std::vector<double>& at(const std::string& name) const;  // MissingVariable
    bool has(const std::string& name) const;
};

// Effective noise seed: the caller's explicit seed wins, then a Seed
// override, then the model's own Seed constant, then 1.
std::uint64_t resolve_seed(const CompiledModel& m, const Overrides& overrides,
                           std::optional<std::uint64_t> explicit_seed);

// Evaluates every auxiliary at the current time, then advances each stock by
// one Euler step: s += dt * net_flow. Flows all read the pre-update state.
// step_index keys the noise draws for this step.
void step(const CompiledModel& m, std::vector<double>& state, double time, double dt,
          const RngPolicy& policy, std::uint64_t step_index);

// Fixed-step run over the model's own control settings, or an explicit one.
// Overrides replace constant values and stock initial values by name.
RunResult simulate(const CompiledModel& m, const RngPolicy& policy,
                   const Overrides& overrides = {});
RunResult simulate(const CompiledModel& m, const RngPolicy& policy, const Overrides& overrides,
                   const SimControl& control);

// Pointwise evaluation against named values; lookup misses raise
// UnresolvedReference and INTEG is rejected. Noise sites are numbered in
// preorder under the given stream and step.
double eval_expr(const Expr& e,
                 const std::function<std::optional<double>(const std::string&)>& lookup,
                 const RngPolicy& policy = {}, std::uint64_t stream = 0, std::uint64_t step = 0);

}  // namespace sdsim
