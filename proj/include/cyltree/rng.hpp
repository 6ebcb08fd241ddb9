#ifndef CYLTREE_RNG_HPP
#define CYLTREE_RNG_HPP

#include <cstdint>

namespace cyltree {

/// Seeded PRNG with independent streams (PCG32, XSH-RR output function).
///
/// The same (seed, stream) pair reproduces the identical sequence
/// byte-for-byte on every platform; distinct stream ids select distinct
/// LCG increments and yield statistically independent sequences, which is
/// what replica workers use.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(0), inc_((stream << 1u) | 1u) {
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted =
            static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    /// Unbiased draw from {0, ..., bound-1}: multiply-shift with rejection
    /// of the short low-word region, so no draw is over-represented.
    std::uint32_t uniform_below(std::uint32_t bound) {
        std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * bound;
        auto lo = static_cast<std::uint32_t>(m);
        if (lo < bound) {
            const std::uint32_t threshold = (0u - bound) % bound;
            while (lo < threshold) {
                m = static_cast<std::uint64_t>(next_u32()) * bound;
                lo = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    double next_double() {  // uniform in [0,1), 32-bit resolution
        return next_u32() * (1.0 / 4294967296.0);
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

}  // namespace cyltree

#endif  // CYLTREE_RNG_HPP
