#include "rxval/rng.hpp"

namespace rxval {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

// Canonical SplitMix64 step: advances the state and returns one output.
inline std::uint64_t splitmix_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngStream RngStream::from_seed(std::uint64_t seed) {
    RngStream rng;
    std::uint64_t s = seed;
    for (auto& word : rng.state_) {
        word = splitmix_next(s);
    }
    // xoshiro state must not be all zero; SplitMix64 output makes this
    // astronomically unlikely, but guard anyway.
    if ((rng.state_[0] | rng.state_[1] | rng.state_[2] | rng.state_[3]) == 0) {
        rng.state_[0] = 0x9E3779B97F4A7C15ULL;
    }
    return rng;
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
    if (bound <= 1) {
        return 0;
    }
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t x = next_u64();
        if (x >= threshold) {
            return x % bound;
        }
    }
}

std::uint64_t derived_seed(std::uint64_t base_seed, std::uint64_t replicate,
                           std::uint64_t purpose_tag) {
    std::uint64_t h = mix64(base_seed + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (replicate + 0xBF58476D1CE4E5B9ULL));
    h = mix64(h ^ (purpose_tag + 0x94D049BB133111EBULL));
    return h;
}

RngStream derive_stream(std::uint64_t base_seed, std::uint64_t replicate,
                        std::uint64_t purpose_tag) {
    return RngStream::from_seed(derived_seed(base_seed, replicate, purpose_tag));
}

}  // namespace rxval
