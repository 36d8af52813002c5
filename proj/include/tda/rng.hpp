#pragma once

// Seedable random source with portable output. std::mt19937_64 is specified
// bit-for-bit by the standard, but the standard distributions are not; the
// uniform/normal draws below are implemented by hand so that a seed produces
// the same stream on every platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace tda {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection keeps the draw exactly uniform (and stream-portable).
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller; one spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    std::uint64_t raw() { return eng_(); }

    // Derives an independent per-instance seed from a base seed, so parallel
    // generation of instance k is reproducible regardless of schedule.
    // Mixing: splitmix64 finalizer applied to base + (k+1) * golden gamma.
    static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t instance) {
        std::uint64_t z = base + (instance + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::string generator_name() { return "mt19937_64+box-muller"; }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace tda
