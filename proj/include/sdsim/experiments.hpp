#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdsim/compile.hpp"
#include "sdsim/frs.hpp"
#include "sdsim/rng.hpp"
#include "sdsim/simulate.hpp"
#include "sdsim/stats.hpp"

namespace sdsim {

struct ScenarioSpec {
    std::string label;
    Preset preset;
};

struct ExperimentSpec {
    std::string name;
    std::vector<ScenarioSpec> scenarios;
    std::vector<std::uint64_t> seeds;
    Reducer reducer = Reducer::TimeMean;
    std::string metric = "Avg Quality";
    std::vector<std::string> tracked;
    NoiseMode mode = NoiseMode::Stochastic;
    // Seed sweeps carry the seed inside each scenario's overrides; each
    // scenario then runs once and the seeds list above is ignored.
    bool seeds_from_overrides = false;
};

struct ScenarioRun {
    std::uint64_t seed = 0;
    double reduced = 0.0;
    // One saved series per tracked variable, parallel to spec.tracked.
    std::vector<std::vector<double>> tracked;
    std::string csv;  // relative path, empty when no output directory was given
};

struct ScenarioResult {
    std::string label;
    Preset preset;
    SampleSummary summary;  // of the reduced metric across runs
    std::vector<ScenarioRun> runs;
};

struct Comparison {
    std::string a;
    std::string b;
    double mean_diff = 0.0;  // mean(a) - mean(b)
    int a_below_b = 0;       // runs where a's reduced metric is below b's
    int n = 0;
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::vector<double> times;
    std::vector<ScenarioResult> scenarios;
    std::vector<Comparison> comparisons;  // all scenario pairs in spec order
    std::vector<std::string> notes;
    std::vector<std::string> sections;  // extra markdown blocks for the summary
    nlohmann::ordered_json extra;       // machine-readable experiment-specific data
    std::vector<std::string> figures;   // relative paths, filled by write_report
};

std::vector<std::string> default_tracked();
std::vector<std::uint64_t> default_seeds(std::size_t n = 20);

// Worker count for scenario runs: SDSIM_THREADS when set, else hardware
// concurrency. Results are merged by task index, so the count never
// affects report content.
std::size_t thread_cap();

// Runs every scenario x seed combination, reduces the metric, and collects
// tracked series. When outdir is given, per-run CSVs are written under
// outdir/csv after all runs complete. Identical specs produce identical
// reports regardless of thread count or execution order.
ExperimentReport run_experiment(const ExperimentSpec& spec, const CompiledModel& model,
                                const std::optional<std::string>& outdir = {});

nlohmann::ordered_json report_json(const ExperimentReport& report);
std::string report_markdown(const ExperimentReport& report);

// Renders one overlay chart per tracked variable (first run of each
// scenario) into outdir/figs, records them in report.figures, then writes
// outdir/report.json and outdir/summary.md.
void write_report(ExperimentReport& report, const std::string& outdir);

// The canned studies below run the built-in recommender model.
ExperimentReport run_base(const std::vector<std::uint64_t>& seeds,
                          const std::optional<std::string>& outdir = {});
ExperimentReport run_activation(const std::vector<std::uint64_t>& seeds,
                                const std::optional<std::string>& outdir = {});
ExperimentReport run_distributions(const std::vector<std::uint64_t>& seeds,
                                   const std::optional<std::string>& outdir = {});
ExperimentReport run_interventions(const std::vector<std::uint64_t>& seeds,
                                   const std::optional<std::string>& outdir = {});

// One scenario per value, labeled "<param>=<value>". Sweeping Seed routes
// each value through the model's seed resolution instead of the runner's
// seed list. Throws UnknownOverride when param is not an overridable name.
ExperimentReport run_sweep(const std::string& param, const std::vector<double>& values,
                           const std::vector<std::uint64_t>& seeds,
                           const std::optional<std::string>& outdir = {});

}  // namespace sdsim
