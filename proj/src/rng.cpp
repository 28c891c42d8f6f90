#include "sdsim/rng.hpp"

#include <algorithm>
#include <cmath>

#include "sdsim/errors.hpp"

namespace sdsim {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t keyed_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t site,
                         std::uint64_t step, std::uint64_t attempt) {
    // Chain of splitmix64 stages, feeding each key component into the state.
    // Every stage adds the gamma and finalizes, so sparse keys still avalanche.
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s = h ^ stream;
    h = splitmix64(s);
    s = h ^ site;
    h = splitmix64(s);
    s = h ^ step;
    h = splitmix64(s);
    s = h ^ attempt;
    h = splitmix64(s);
    return h;
}

double uniform01(std::uint64_t bits) {
    // Top 52 bits index a cell and the value sits at its midpoint, so every
    // result is exactly (k+0.5)*2^-52 in [2^-53, 1-2^-53]; no rounding can
    // reach either endpoint.
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

double inverse_normal_cdf(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    static constexpr double p_low = 0.02425;

    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidParameter("inverse_normal_cdf: p must lie in (0,1)");
    }
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double draw_normal(double lo, double hi, double mean, double sd, const RngPolicy& policy,
                   std::uint64_t stream, std::uint64_t site, std::uint64_t step) {
    if (lo > hi) {
        throw InvalidBounds("draw_normal: lower bound exceeds upper bound");
    }
    if (policy.mode == NoiseMode::NoiseOff) {
        return std::clamp(mean, lo, hi);
    }
    int attempts = std::max(policy.max_attempts, 1);
    double x = mean;
    for (int k = 0; k < attempts; ++k) {
        double u = uniform01(keyed_bits(policy.seed, stream, site, step,
                                        static_cast<std::uint64_t>(k)));
        x = mean + sd * inverse_normal_cdf(u);
        if (x >= lo && x <= hi) return x;
    }
    return std::clamp(x, lo, hi);
}

double CounterRng::uniform() { return uniform01(keyed_bits(seed_, stream_, 0, counter_++)); }

double CounterRng::normal() { return inverse_normal_cdf(uniform()); }

}  // namespace sdsim
