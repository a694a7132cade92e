#pragma once

// Deterministic random source for all stochastic code in the library.
//
// Reproducibility contract: every random decision reduces to the raw 64-bit
// output stream of std::mt19937_64 (whose behaviour is pinned by the C++
// standard) plus the fixed reductions below. Identical seeds therefore give
// bit-identical results on every platform, compiler and standard library.
//
//   next_u64()          raw engine output
//   uniform_below(m)    rejection from the top: draw r until r >= 2^64 mod m,
//                       return r % m
//   uniform_double()    (next_u64() >> 11) * 2^-53, uniform in [0, 1)
//   bernoulli(p)        uniform_double() < p
//
// Seeds for subtasks are derived with derive_seed(), built on the splitmix64
// finalizer, so that independent streams never share a generator.

#include <cstdint>
#include <random>
#include <stdexcept>

namespace rbn {

/// splitmix64 of Steele, Lea and Vigna; used for seed mixing only.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

/// One splitmix64 step as a 64-bit bijection-plus-increment mixer.
inline std::uint64_t mix64(std::uint64_t x) {
    return SplitMix64{x}.next();
}

/// Per-task seed derivation: mix64(root ^ mix64(stream << 32 | index)).
/// Injective in (stream, index) for a fixed root, since mix64 is a bijection
/// composed with a fixed increment and the packing is injective.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint32_t stream,
                                 std::uint32_t index) {
    const std::uint64_t packed =
        (static_cast<std::uint64_t>(stream) << 32) | index;
    return mix64(root ^ mix64(packed));
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Unbiased integer in [0, bound). Rejection from the top keeps the
    /// result independent of how the platform would implement
    /// std::uniform_int_distribution.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0)
            throw std::invalid_argument("uniform_below: bound must be > 0");
        const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold)
                return r % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform_double() < p; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace rbn
