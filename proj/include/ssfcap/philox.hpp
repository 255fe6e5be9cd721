#pragma once

// Counter-based random numbers. Every noise sample is a pure function of
// (seed, stream, segment, sample index), so parallel schedules cannot change
// simulation output.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace ssfcap {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key)
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// SplitMix64 finalizer; used to derive independent seeds from structured tags.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) { return mix64(seed ^ mix64(tag)); }

/// Uniform double in the open interval (0, 1) from 64 random bits.
constexpr double to_open_unit(std::uint64_t bits) { return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52; }

/// Identifies one independent noise stream. Identical (seed, stream_id) pairs
/// reproduce identical sequences on every host and thread count.
struct NoiseSource {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    /// Circularly symmetric complex Gaussian sample with E|n|^2 = variance,
    /// addressed by (segment, index). Uses the polar form: |n|^2 ~ Exp(variance)
    /// and an independent uniform phase.
    std::complex<double> complex_normal(std::uint32_t segment, std::uint32_t index, double variance) const
    {
        const Philox4x32::Counter ctr{index, segment, static_cast<std::uint32_t>(stream_id),
                                      static_cast<std::uint32_t>(stream_id >> 32)};
        const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
        const auto r = Philox4x32::generate(ctr, key);
        const double u_mag = to_open_unit((static_cast<std::uint64_t>(r[0]) << 32) | r[1]);
        const double u_phase = to_open_unit((static_cast<std::uint64_t>(r[2]) << 32) | r[3]);
        const double radius = std::sqrt(-variance * std::log(u_mag));
        const double phase = 2.0 * std::numbers::pi * u_phase;
        return {radius * std::cos(phase), radius * std::sin(phase)};
    }
};

} // namespace ssfcap
