#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nhrmt::rng {

// SplitMix64 finalizer: bijective 64-bit mix with good avalanche.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic per-realization stream seed: workers may draw realizations in
// any order and still produce bitwise-identical matrices.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t realization_index) {
    return splitmix64(splitmix64(seed) ^ (0x9E3779B97F4A7C15ULL * (realization_index + 1)));
}

// Standard-normal stream with a fixed, implementation-independent mapping from
// engine output to doubles (std::normal_distribution is not portable).
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t stream_seed) : eng_(stream_seed) {}

    // Uniform on (0, 1], 53-bit resolution.
    double next_uniform() {
        return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    // Box-Muller, caching the second variate.
    double next_normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace nhrmt::rng
