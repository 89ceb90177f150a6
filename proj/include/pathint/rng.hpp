#pragma once

// Counter-based pseudo-random generator. Every draw is a pure hash of
// (seed, counter), so independently seeded streams never share state and a
// stream can be replayed from any offset. Derived component streams
// (seed XOR index) are independent by construction.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "pathint/common.hpp"

namespace pathint {

namespace detail {

/// SplitMix64 finalizer: a bijective 64-bit mix with full avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(detail::mix64(seed)) {}

    std::uint64_t next_u64() {
        return detail::mix64(key_ + (counter_++) * 0x9E3779B97F4A7C15ull);
    }

    /// Uniform draw in the open interval (0,1); never returns 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard normal via the trigonometric Box-Muller transform.
    /// Consumes exactly two uniforms per pair; the spare is cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Poisson draw. Knuth's product method, chunked so that large means do
    /// not underflow exp(-mean).
    std::uint64_t next_poisson(double mean) {
        require(mean >= 0 && is_finite(mean), "poisson mean must be finite and >= 0");
        std::uint64_t total = 0;
        while (mean > 0) {
            const double chunk = mean > 500.0 ? 500.0 : mean;
            mean -= chunk;
            const double limit = std::exp(-chunk);
            double prod = 1.0;
            std::uint64_t k = 0;
            do {
                prod *= next_uniform();
                ++k;
            } while (prod > limit);
            total += k - 1;
        }
        return total;
    }

    double next_exponential(double mean) { return -mean * std::log(next_uniform()); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0;
    bool have_spare_ = false;
};

}  // namespace pathint
