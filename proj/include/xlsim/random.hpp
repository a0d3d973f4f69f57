#pragma once

#include <cstdint>
#include <random>

namespace xlsim {

using Rng = std::mt19937_64;

/// Independent generator for one (seed, stream) pair. Streams keep channel
/// generation, CSI noise and block-error draws decoupled so changing one
/// consumer never shifts the draws seen by another.
inline Rng make_rng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                      0x9e3779b9u};
    return Rng(seq);
}

namespace streams {
inline constexpr std::uint32_t kChannel = 1;
inline constexpr std::uint32_t kCsiNoise = 2;
inline constexpr std::uint32_t kBlockError = 3;
}  // namespace streams

/// Uniform double in [0, 1) from the top 53 bits.
template <class G>
double uniform01(G& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace xlsim
