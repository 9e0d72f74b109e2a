#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace snowaug {

/// SplitMix64 finalizer:
///   z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
///   z ^= z >> 27; z *= 0x94D049BB133111EB;
///   z ^= z >> 31
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Per-item seed: mix64(master + (index + 1) * 0x9E3779B97F4A7C15), i.e. the
/// (index+1)-th output of a SplitMix64 generator started at `master`.
constexpr std::uint64_t derive_item_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// 64-bit FNV-1a, used for config digests.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// SplitMix64 as a UniformRandomBitGenerator: the state advances by the
/// golden-ratio increment and each output is mix64 of the new state.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    constexpr result_type operator()() noexcept { return mix64(state_ += 0x9E3779B97F4A7C15ULL); }

private:
    std::uint64_t state_;
};

/// Random stream for one work item, backed by SplitMix64. The transforms
/// avoid the standard library's implementation-defined distribution classes:
/// uniform is written out and normal uses Boost.Random's ziggurat.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal(double mean, double stddev);
    /// Same sequence as calling normal() out.size() times.
    void fill_normal(std::span<double> out, double mean, double stddev);

private:
    SplitMix64 engine_;
};

}  // namespace snowaug
