#ifndef TRAILMINE_RNG_HPP
#define TRAILMINE_RNG_HPP

#include <array>
#include <cstdint>

namespace trailmine {

/**
 * Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
 * as easy as 1, 2, 3"). A pure map from a 128-bit counter and a 64-bit key
 * to 128 random bits.
 */
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/**
 * Counter-based random stream. The master seed is the Philox key and the
 * stream index occupies the upper half of the counter, so stream i of a
 * given seed is reproducible and independent of every other stream
 * regardless of which thread draws it or in what order.
 */
class RandomStream
{
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    //! Uniform on [0, 1) with 53 random bits.
    double uniform();
    //! Exponential with mean 1.
    double exponential();

private:
    void refill();

    std::array<std::uint32_t, 2> m_key;
    std::array<std::uint32_t, 4> m_counter;
    std::array<std::uint32_t, 4> m_buffer{};
    unsigned m_used{4};
};

//! SplitMix64 finaliser of (a, b); used to derive sub-seeds from a master seed.
std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b);

} // namespace trailmine

#endif // TRAILMINE_RNG_HPP
