#pragma once

#include <cstdint>
#include <random>

namespace ustlocal {

/// The single engine type used everywhere. mt19937_64 output is fixed by the
/// standard, and the helpers below avoid the implementation-defined
/// std::*_distribution classes, so streams are identical across toolchains.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to turn (seed, index) pairs into engine seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Independent stream number `stream` derived from `base_seed`.
Rng derive_rng(std::uint64_t base_seed, std::uint64_t stream) noexcept;

/// Uniform integer in [0, bound). `bound` must be positive.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) noexcept;

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng) noexcept;

}  // namespace ustlocal
