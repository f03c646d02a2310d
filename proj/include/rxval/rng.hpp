#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace rxval {

// SplitMix64 finalizer (Stafford mix13). Bijective on 64-bit words; used
// both for seed derivation and for expanding a seed into generator state.
std::uint64_t mix64(std::uint64_t x);

// xoshiro256** (Blackman & Vigna). The algorithm is fixed so that an
// identical seed produces an identical sequence on every platform; all
// randomness in this library flows through this class, never through
// std::random distributions.
class RngStream {
public:
    static RngStream from_seed(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53 random bits.
    double next_double();

    // Uniform in [0, bound) via rejection sampling; exact, no modulo bias.
    std::uint64_t next_below(std::uint64_t bound);

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::array<std::uint64_t, 4> state_{};
};

// Purpose tags for derived streams. Adding new purposes must append tags,
// never renumber, so existing dataset streams stay stable.
inline constexpr std::uint64_t kTagData = 0;
inline constexpr std::uint64_t kTagPlan = 1;
inline constexpr std::uint64_t kTagModel = 2;  // reserved

// 64-bit seed behind the stream for (base_seed, replicate, purpose_tag).
std::uint64_t derived_seed(std::uint64_t base_seed, std::uint64_t replicate,
                           std::uint64_t purpose_tag);

// Deterministic, collision-resistant stream derivation: distinct
// (replicate, purpose_tag) pairs give independent streams for practical
// purposes.
RngStream derive_stream(std::uint64_t base_seed, std::uint64_t replicate,
                        std::uint64_t purpose_tag);

}  // namespace rxval
