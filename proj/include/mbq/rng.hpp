#pragma once

#include <cstdint>
#include <random>

namespace mbq {

// splitmix64 step; used to derive independent stream seeds from (seed, slot)
// counters so that policies consuming randomness never shift the
// environment's draws. Keeps common-random-number comparisons honest.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
    std::uint64_t state = a;
    std::uint64_t m = splitmix64(state);
    state ^= b + 0x632be59bd9b4e019ULL + (m << 6) + (m >> 2);
    m ^= splitmix64(state);
    state ^= c + 0x9e3779b97f4a7c15ULL + (m << 6) + (m >> 2);
    return splitmix64(state);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t counter = 0) {
    return std::mt19937_64(mix_seed(seed, stream, counter));
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli_draw(std::mt19937_64& rng, double p) {
    return uniform01(rng) < p;
}

// Unbiased draw from {0, ..., n-1} via rejection; portable across standard
// libraries, unlike std::uniform_int_distribution.
inline int uniform_index(std::mt19937_64& rng, int n) {
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
    for (;;) {
        std::uint64_t v = rng();
        if (v < limit) return static_cast<int>(v % span);
    }
}

} // namespace mbq
