#pragma once

#include <cstdint>

namespace cardest {

// SplitMix64 finalizer. Used both as a counter-based hash (sampling keys on
// (seed, row index)) and as the step function of the sequential generator, so
// every random draw in the project is reproducible across platforms without
// touching the implementation-defined std:: distributions.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double to_unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Keyed, order-independent uniform draw: a pure function of (seed, index).
inline double keyed_uniform(std::uint64_t seed, std::uint64_t index) {
    return to_unit_interval(splitmix64(splitmix64(seed) ^ splitmix64(index)));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double next_unit() { return to_unit_interval(next_u64()); }

    // Uniform in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(next_unit() * static_cast<double>(n)) % n;
    }

private:
    std::uint64_t state_;
};

}  // namespace cardest
