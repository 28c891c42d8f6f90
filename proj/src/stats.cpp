#include "sdsim/stats.hpp"

#include <cmath>

#include "sdsim/errors.hpp"
#include "sdsim/rng.hpp"

namespace sdsim {

namespace {

double exp_draw(CounterRng& rng, double rate) { return -std::log(1.0 - rng.uniform()) / rate; }

// Marsaglia-Tsang for shape >= 1: accept d*v where v = (1 + c*z)^3, using the
// quartic squeeze before the exact log test.
double gamma_mt(CounterRng& rng, double alpha) {
    double d = alpha - 1.0 / 3.0;
    double c = 1.0 / (3.0 * std::sqrt(d));
    while (true) {
        double z = rng.normal();
        double t = 1.0 + c * z;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = rng.uniform();
        if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
    }
}

bool integer_shape(double alpha) {
    return alpha == std::floor(alpha) && alpha >= 1.0 && alpha <= 256.0;
}

}  // namespace

std::vector<double> sample(const Distribution& dist, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw InvalidParameter("sample: n must be at least 1");
    CounterRng rng(seed);
    std::vector<double> out;
    out.reserve(n);

    if (const auto* e = std::get_if<Exponential>(&dist)) {
        if (!(e->rate > 0.0)) throw InvalidParameter("exponential rate must be positive");
        for (std::size_t i = 0; i < n; ++i) out.push_back(exp_draw(rng, e->rate));
        return out;
    }
    if (const auto* l = std::get_if<LogNormal>(&dist)) {
        if (!(l->sigma > 0.0)) throw InvalidParameter("lognormal sigma must be positive");
        for (std::size_t i = 0; i < n; ++i) out.push_back(std::exp(l->mu + l->sigma * rng.normal()));
        return out;
    }
    const auto& g = std::get<Gamma>(dist);
    if (!(g.alpha > 0.0) || !(g.theta > 0.0)) {
        throw InvalidParameter("gamma parameters must be positive");
    }
    if (integer_shape(g.alpha)) {
        auto k = static_cast<int>(g.alpha);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < k; ++j) acc += exp_draw(rng, 1.0);
            out.push_back(g.theta * acc);
        }
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (g.alpha >= 1.0) {
            out.push_back(g.theta * gamma_mt(rng, g.alpha));
        } else {
            // boost to shape alpha+1, then scale by u^(1/alpha)
            double x = gamma_mt(rng, g.alpha + 1.0);
            out.push_back(g.theta * x * std::pow(rng.uniform(), 1.0 / g.alpha));
        }
    }
    return out;
}

double skewness(const std::vector<double>& xs) {
    auto n = xs.size();
    if (n < 3) {
        throw InsufficientData("skewness needs at least 3 samples, got " + std::to_string(n));
    }
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0;
    for (double x : xs) {
        double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (m2 == 0.0) throw ZeroVariance();
    double g1 = m3 / (m2 * std::sqrt(m2));
    double nn = static_cast<double>(n);
    return g1 * std::sqrt(nn * (nn - 1.0)) / (nn - 2.0);
}

SampleSummary describe(const std::vector<double>& xs) {
    SampleSummary s;
    s.n = xs.size();
    if (s.n == 0) return s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(s.n);
    if (s.n >= 2) {
        double acc = 0.0;
        for (double x : xs) acc += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(acc / static_cast<double>(s.n - 1));
    }
    if (s.n >= 3 && s.sd > 0.0) s.skewness = skewness(xs);
    return s;
}

double reduce_series(const RunResult& run, const std::string& variable, Reducer r) {
    const auto& series = run.at(variable);
    if (series.empty()) throw EmptySeries("no save points for " + variable);
    if (r == Reducer::FinalValue) return series.back();
    double acc = 0.0;
    for (double v : series) acc += v;
    return acc / static_cast<double>(series.size());
}

SampleSummary summarize(const std::vector<RunResult>& ensemble, const std::string& variable,
                        Reducer r) {
    std::vector<double> reduced;
    reduced.reserve(ensemble.size());
    for (const auto& run : ensemble) reduced.push_back(reduce_series(run, variable, r));
    return describe(reduced);
}

}  // namespace sdsim
