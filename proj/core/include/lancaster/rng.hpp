#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>

namespace lancaster {

/// xoshiro256** generator with SplitMix64 seeding.
///
/// Streams are addressed by a root seed plus a list of integer keys
/// (replication index, distribution id, ...). Each distinct key path gives an
/// independently seeded generator, so parallel work is reproducible no matter
/// how replicates are scheduled. All variate algorithms are implemented here
/// rather than taken from <random> so that output is identical across
/// standard libraries.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept;

    static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept;
    static Rng stream(std::uint64_t seed, std::span<const std::uint64_t> keys) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return next(); }

    std::uint64_t next() noexcept;

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    // Uniform on (0, 1).
    double uniform_open() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    // Uniform integer in [0, n), unbiased (Lemire's multiply-shift with rejection).
    std::uint64_t uniform_index(std::uint64_t n) noexcept;

    // Standard normal (Marsaglia polar method).
    double normal() noexcept;
    // Gamma(shape, 1) by Marsaglia-Tsang; shape > 0.
    double gamma(double shape) noexcept;
    double chi_squared(double df) noexcept { return 2.0 * gamma(0.5 * df); }

    // Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::span<T> values) noexcept {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_index(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

// Stable 64-bit FNV-1a hash, used to key RNG streams by names.
std::uint64_t hash_key(std::string_view text) noexcept;

}  // namespace lancaster
