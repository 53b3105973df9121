#pragma once

#include <cmath>
#include <cstdint>

namespace hitfit {

/// splitmix64 generator. Chosen over <random> engines because its output is
/// pinned by the algorithm alone, so seeded fits and synthetic series stay
/// byte-identical across standard libraries and platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Independent stream for (seed, stream) pairs; used to give every random
    /// start its own generator so results do not depend on evaluation order.
    static SplitMix64 derive(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 rng(seed);
        rng.state_ += 0x9e3779b97f4a7c15ULL * (stream + 1);
        rng.next_u64();
        return rng;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

    /// Box-Muller transform; consumes two uniforms per draw.
    double next_gaussian(double mean, double sigma) {
        const double u1 = 1.0 - next_unit(); // (0, 1]
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * radius * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace hitfit
