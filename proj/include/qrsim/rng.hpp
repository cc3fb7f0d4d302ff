#pragma once

// Deterministic randomness helpers. Every stochastic step in the project
// (coupling draws, noise augmentation, measurement noise) goes through this
// header; std::*_distribution is implementation-defined and would break
// cross-platform reproducibility, so value mappings are spelled out here.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace qrsim {

/// Derives an independent stream seed from a base seed and a stream tag
/// (splitmix64 finalizer over the combined value).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// 64-bit FNV-1a, used to fold strings (task names) into seed streams.
inline std::uint64_t hash64(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// mt19937_64 (sequence pinned by the standard) with explicit value mappings.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool coin() { return (gen_() & 1ull) != 0; }

    /// Standard normal deviate via Box-Muller.
    double gaussian()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        if (u1 <= 0.0)
            u1 = 0x1.0p-53;
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qrsim
