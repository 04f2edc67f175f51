#pragma once

#include <cstdint>

namespace flanders {

// SplitMix64. Streams are derived from (master seed, stream index) so the
// outcome of trial i never depends on scheduling or on how many draws
// earlier trials consumed.
struct splitmix64 {
    std::uint64_t state;

    explicit splitmix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased for our tiny bounds (q <= 7, small shapes); plain modulo is
    // fine since bound << 2^64 and we only need reproducibility.
    std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }
};

inline splitmix64 stream_for(std::uint64_t master_seed, std::uint64_t index) {
    splitmix64 g(master_seed ^ ((index + 1) * 0x9E3779B97F4A7C15ULL));
    g.next();
    return g;
}

} // namespace flanders
