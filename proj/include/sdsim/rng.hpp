#pragma once

#include <cstdint>

namespace sdsim {

// One splitmix64 step: advances state by the golden gamma and returns the
// finalized output. Used both as a PRNG step and as a mixing stage.
std::uint64_t splitmix64(std::uint64_t& state);

// Stateless draw: every random number is a hash of (seed, stream, site, step,
// attempt). Same key, same bits, regardless of evaluation order or thread.
std::uint64_t keyed_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t site,
                         std::uint64_t step, std::uint64_t attempt = 0);

// Maps 64 random bits onto the open interval (0,1); never returns 0 or 1.
double uniform01(std::uint64_t bits);

// Acklam's rational approximation to the standard normal quantile.
// Relative error below 1.2e-9 over (0,1).
double inverse_normal_cdf(double p);

enum class NoiseMode { Stochastic, NoiseOff };

struct RngPolicy {
    std::uint64_t seed = 1;
    NoiseMode mode = NoiseMode::Stochastic;
    int max_attempts = 64;
};

// Truncated normal draw on [lo, hi]. Resamples until a draw lands inside the
// bounds; after max_attempts the last draw is clamped to the nearest bound.
// NoiseOff skips sampling entirely and returns mean clamped to [lo, hi].
// Throws InvalidBounds when lo > hi.
double draw_normal(double lo, double hi, double mean, double sd, const RngPolicy& policy,
                   std::uint64_t stream, std::uint64_t site, std::uint64_t step);

// Sequential view of the keyed generator for bulk sampling: draw i of stream s
// reads keyed_bits(seed, s, 0, i). Distinct streams never overlap.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    double uniform();  // (0,1)
    double normal();   // standard normal

    std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace sdsim
