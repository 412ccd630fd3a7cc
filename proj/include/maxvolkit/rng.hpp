#pragma once

#include <cmath>
#include <cstdint>

namespace maxvolkit {

/// PCG32 (PCG-XSH-RR 64/32, minimal standard variant). Chosen over the
/// standard-library engines because its output stream is fixed by the
/// algorithm itself, so seeded runs are reproducible across platforms and
/// standard-library implementations. See README for the exact definition.
class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed_value = 0x853c49e6748fea9bULL,
                   std::uint64_t stream = 0xda3e39cb94b95bdbULL) {
        seed(seed_value, stream);
    }

    void seed(std::uint64_t seed_value, std::uint64_t stream = 0xda3e39cb94b95bdbULL) {
        state_ = 0u;
        inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += seed_value;
        next_u32();
        has_spare_ = false;
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        return (hi << 32u) | lo;
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11u) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller on the deterministic uniform stream.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace maxvolkit
