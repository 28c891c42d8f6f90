#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sdsim/simulate.hpp"

namespace sdsim {

struct Exponential {
    double rate;
};
struct LogNormal {
    double mu;
    double sigma;
};
struct Gamma {
    double alpha;
    double theta;
};
using Distribution = std::variant<Exponential, LogNormal, Gamma>;

// Deterministic sampling: inverse CDF for the exponential, exp of a normal
// deviate for the log-normal, a sum of exponentials for integer-shape gamma
// and Marsaglia-Tsang squeeze rejection otherwise.
std::vector<double> sample(const Distribution& dist, std::size_t n, std::uint64_t seed);

// Adjusted Fisher-Pearson standardized third moment,
// g1 * sqrt(n(n-1)) / (n-2). Throws InsufficientData below n=3 and
// ZeroVariance on constant input.
double skewness(const std::vector<double>& xs);

struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double skewness = 0.0;
};

// Tolerant summary: sd is the sample standard deviation (0 below n=2) and
// skewness is 0 wherever the strict estimator is undefined.
SampleSummary describe(const std::vector<double>& xs);

enum class Reducer { TimeMean, FinalValue };

// One scalar per run: mean over all save points, or the final value.
double reduce_series(const RunResult& run, const std::string& variable, Reducer r);

// Reduces each run of the ensemble, then summarizes the scalars.
SampleSummary summarize(const std::vector<RunResult>& ensemble, const std::string& variable,
                        Reducer r);

}  // namespace sdsim
