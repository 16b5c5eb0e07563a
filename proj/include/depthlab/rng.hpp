#pragma once

// Seed derivation. Every random stream in the library is a std::mt19937_64
// seeded from (root seed, stream tag, index), so results do not depend on
// which worker handles which index.

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace depthlab::rng {

using Engine = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index);

Engine engine(std::uint64_t root, std::uint64_t stream, std::uint64_t index);

/// Uniform integer in [0, 2^bits) built from raw engine output.
mpz_class uniform_bits(Engine& eng, std::uint64_t bits);

/// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Engine& eng);

// Stream tags.
inline constexpr std::uint64_t kSampleStream = 0x5A4D504C;
inline constexpr std::uint64_t kOrbitStream = 0x4F524249;
inline constexpr std::uint64_t kFixtureStream = 0x46495854;

}  // namespace depthlab::rng
