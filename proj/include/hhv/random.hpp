#pragma once

#include <cstdint>

namespace hhv {

// Counter-based pseudo-random numbers: every draw is a pure function of its
// key, so results never depend on evaluation order or worker count.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    constexpr std::uint64_t seed() const noexcept { return seed_; }

    constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t index,
                                 std::uint64_t lane = 0) const noexcept {
        std::uint64_t h = mix(seed_ ^ 0x243f6a8885a308d3ULL);
        h = mix(h ^ stream);
        h = mix(h ^ index);
        return mix(h ^ lane);
    }

    // Uniform in [0, 1).
    constexpr double uniform(std::uint64_t stream, std::uint64_t index,
                             std::uint64_t lane = 0) const noexcept {
        return static_cast<double>(bits(stream, index, lane) >> 11) * 0x1.0p-53;
    }

    constexpr double uniform(double lo, double hi, std::uint64_t stream, std::uint64_t index,
                             std::uint64_t lane = 0) const noexcept {
        return lo + (hi - lo) * uniform(stream, index, lane);
    }

    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Derives an independent child seed, e.g. one per search trial.
    constexpr std::uint64_t derive(std::uint64_t stream, std::uint64_t index) const noexcept {
        return bits(stream, index, 0x5eed);
    }

private:
    std::uint64_t seed_;
};

}  // namespace hhv
