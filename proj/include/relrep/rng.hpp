#pragma once

#include <cstdint>

#include "relrep/stat_kernel.hpp"

namespace relrep {

// Counter-based 64-bit generator.
//
//   block(key, i) = mix64(key + i * 0x9E3779B97F4A7C15)
//   mix64(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//              z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//              return z ^ (z >> 31)
//
// The i-th draw of a stream depends only on (key, i), so a stream can be
// reproduced or split without replaying earlier draws. Uniforms take the top
// 53 bits and are centred in their cell, so they lie strictly inside (0, 1).

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Key of sub-stream `stream` under a master seed.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed) ^ (stream * kGoldenGamma + 0xD1B54A32D192ED03ULL));
}

class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key, std::uint64_t counter = 0)
        : key_(key), counter_(counter) {}

    constexpr std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGoldenGamma); }

    constexpr double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_normal() { return normal_quantile(next_uniform()); }

    constexpr std::uint64_t key() const { return key_; }
    constexpr std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace relrep
