#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lcsm {

/// Deterministic RNG with hand-rolled uniform/normal transforms so that
/// streams are reproducible across standard library implementations.
/// Replication streams derive from (seed, rep) by splitmix64 mixing,
/// independent of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    static Rng for_replication(std::uint64_t seed, std::uint64_t rep) {
        return Rng(mix(seed) ^ mix(rep + 0x9E3779B97F4A7C15ULL));
    }

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586;
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

    bool bernoulli(double prob) { return uniform() < prob; }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace lcsm
