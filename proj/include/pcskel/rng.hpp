#pragma once

#include <cstdint>
#include <limits>

namespace pcskel {

/// Counter-based 64-bit generator: the i-th output is a pure function of (key, i).
/// Streams are split by deriving a new key, so replicate r of a run never depends on
/// how many draws other replicates consumed.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed) noexcept : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix(key_ + kGamma * ++counter_); }

    /// Independent child stream identified by `id`.
    CounterRng split(std::uint64_t id) const noexcept {
        return CounterRng(mix(key_ ^ mix(id + kGamma)), Tag{});
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    std::uint64_t counter() const noexcept { return counter_; }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    struct Tag {};
    CounterRng(std::uint64_t key, Tag) noexcept : key_(key) {}

    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace pcskel
