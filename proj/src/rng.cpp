#include "sandnet/rng.hpp"

namespace sandnet {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SplitMix64::result_type SplitMix64::operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
    const std::uint64_t reject_below = (0 - bound) % bound;  // 2^64 mod bound
    while (true) {
        const std::uint64_t x = (*this)();
        if (x >= reject_below) return x % bound;
    }
}

double SplitMix64::unit() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t config, std::uint64_t run) noexcept {
    return mix64(mix64(base + kGolden * (config + 1)) + kGolden * (run + 1));
}

}  // namespace sandnet
