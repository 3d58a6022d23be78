#pragma once

#include <cstdint>

#include "schrocov/vec3.hpp"

namespace schrocov {

/// SplitMix64: tiny seeded generator with platform-independent output, used
/// wherever reports must be reproducible bit for bit.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform in the ball of the given radius (rejection sampling).
    Vec3 in_ball(double radius) {
        while (true) {
            const Vec3 candidate{uniform(-radius, radius), uniform(-radius, radius), uniform(-radius, radius)};
            if (norm2(candidate) <= radius * radius) return candidate;
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace schrocov
