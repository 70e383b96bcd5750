#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace idkit {

// mt19937_64 is fully pinned by the C++ standard, so a fixed seed gives the
// same stream on every platform. The distribution transforms below are ours
// for the same reason: std::uniform_real_distribution and friends are
// implementation-defined.
using RandomEngine = std::mt19937_64;

inline RandomEngine seeded_engine(std::uint64_t seed) { return RandomEngine(seed); }

/// Uniform double in [0, 1), 53-bit resolution.
inline double next_uniform(RandomEngine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box–Muller (two engine draws per value).
double next_normal(RandomEngine& rng);

/// Uniform integer in [0, bound) by rejection; bound must be positive.
std::uint64_t next_below(RandomEngine& rng, std::uint64_t bound);

/// `count` distinct indices drawn uniformly from [0, population) without
/// replacement, in sampled order (partial Fisher–Yates).
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count,
                                                    RandomEngine& rng);

/// Stable 64-bit mix of a seed and a label, for deriving sub-seeds.
std::uint64_t mix_seed(std::uint64_t base, std::string_view label);

} // namespace idkit
