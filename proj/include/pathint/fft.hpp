#pragma once

// Iterative radix-2 complex FFT, power-of-two sizes only. Enough for the
// circulant-embedding synthesis; inputs are padded to the next power of two.

#include <complex>
#include <numbers>
#include <vector>

#include "pathint/common.hpp"

namespace pathint::detail {

/// In-place DFT: a[j] <- sum_k a[k] exp(-2*pi*i*j*k/N) (inverse=false),
/// or the conjugate transform without 1/N normalization (inverse=true).
inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    require(n > 0 && (n & (n - 1)) == 0, "fft size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace pathint::detail
