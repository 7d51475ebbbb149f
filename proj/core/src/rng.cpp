#include <trailmine/rng.hpp>

#include <cmath>

namespace trailmine {

namespace {

constexpr std::uint32_t PHILOX_M0{0xD2511F53};
constexpr std::uint32_t PHILOX_M1{0xCD9E8D57};
constexpr std::uint32_t PHILOX_W0{0x9E3779B9};
constexpr std::uint32_t PHILOX_W1{0xBB67AE85};
constexpr int PHILOX_ROUNDS{10};

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t product{static_cast<std::uint64_t>(a) * b};
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < PHILOX_ROUNDS; ++round) {
        if (round > 0) {
            key[0] += PHILOX_W0;
            key[1] += PHILOX_W1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(PHILOX_M0, ctr[0], hi0, lo0);
        mulhilo(PHILOX_M1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : m_key{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
      m_counter{0, 0, static_cast<std::uint32_t>(stream_index), static_cast<std::uint32_t>(stream_index >> 32)}
{
}

void RandomStream::refill()
{
    m_buffer = philox4x32(m_counter, m_key);
    // 64-bit block index in the lower half of the counter.
    if (++m_counter[0] == 0) ++m_counter[1];
    m_used = 0;
}

std::uint32_t RandomStream::next_u32()
{
    if (m_used == 4) refill();
    return m_buffer[m_used++];
}

std::uint64_t RandomStream::next_u64()
{
    const std::uint64_t hi{next_u32()};
    return (hi << 32) | next_u32();
}

double RandomStream::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::exponential()
{
    // 1 - u lies in (0, 1], so the log is finite.
    return -std::log1p(-uniform());
}

std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t z{a + 0x9E3779B97F4A7C15ULL * (b + 1)};
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace trailmine
