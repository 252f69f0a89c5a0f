#pragma once

#include <cstdint>
#include <limits>

namespace sandnet {

/// SplitMix64 (Steele, Lea, Flood 2014). The drop schedule and every synthetic
/// generator in the project draw from this, so sequences are reproducible from
/// the algorithm alone:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform integer in [0, bound). Rejects raw draws below 2^64 mod bound, then
    /// reduces modulo bound, so the result is unbiased. `bound` must be nonzero.
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Uniform double in [0, 1) built from the top 53 bits.
    double unit() noexcept;

private:
    std::uint64_t state_;
};

/// The SplitMix64 output function applied to a single word.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for run `run` of sweep configuration `config`:
///   mix64(mix64(base + GOLDEN * (config + 1)) + GOLDEN * (run + 1))
/// with GOLDEN = 0x9E3779B97F4A7C15 and wrapping 64-bit arithmetic.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t config, std::uint64_t run) noexcept;

}  // namespace sandnet
