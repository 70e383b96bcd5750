#include "idkit/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace idkit {

double next_normal(RandomEngine& rng) {
    // Basic Box–Muller; u1 shifted into (0, 1] so the log is finite.
    const double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t next_below(RandomEngine& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    // Rejection below the largest multiple of bound keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count,
                                                    RandomEngine& rng) {
    if (count > population)
        throw std::invalid_argument("sample_without_replacement: count exceeds population");
    std::vector<std::size_t> pool(population);
    for (std::size_t i = 0; i < population; ++i) pool[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(next_below(rng, population - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

std::uint64_t mix_seed(std::uint64_t base, std::string_view label) {
    // FNV-1a over the label, then a splitmix64 finalizer round with the base.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : label) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::uint64_t z = base ^ h;
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace idkit
