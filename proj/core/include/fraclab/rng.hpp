#pragma once

#include <cstdint>

namespace fraclab {

// splitmix64: tiny, deterministic across platforms, good enough for probe
// vectors and synthetic initial data.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; } // [0,1)
    double symmetric() { return 2.0 * uniform() - 1.0; }                       // [-1,1)
};

} // namespace fraclab
