#pragma once

#include <cstdint>

namespace rzero {

/// SplitMix64 finalizer; used to expand (root seed, stream id) pairs into
/// generator state.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derive an independent root seed for a labelled sub-experiment (e.g. one
/// degree of a schedule) so that its trial streams do not overlap others.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag) noexcept {
    return splitmix64(root ^ splitmix64(tag + 0x632BE59BD9B4E019ULL));
}

/// xoshiro256** generator keyed by a root seed and a stream counter.
///
/// Every Monte Carlo trial owns the stream (root, trial index), so results
/// depend only on the seed and never on how trials are scheduled on threads.
/// All variate transforms are implemented here rather than through
/// <random> distributions, whose algorithms differ between standard libraries.
class Rng {
public:
    Rng(std::uint64_t root, std::uint64_t stream) noexcept;

    std::uint64_t next() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (0, 1].
    double uniform_positive() noexcept;
    /// Standard normal N(0, 1) by the Box-Muller transform.
    double normal() noexcept;
    /// Gamma(shape, 1) by Marsaglia-Tsang; shape > 0.
    double gamma(double shape) noexcept;

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rzero
