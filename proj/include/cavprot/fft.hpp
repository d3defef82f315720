#ifndef CAVPROT_FFT_HPP
#define CAVPROT_FFT_HPP

#include <complex>
#include <stdexcept>
#include <vector>

#include "units.hpp"

namespace cavprot {

// In-place iterative radix-2 FFT. Sizes must be powers of two.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse)
{
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? two_pi : -two_pi) / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

// Swap halves so that index 0 moves to the center (and back: its own inverse
// for even sizes).
inline void fftshift(std::vector<std::complex<double>>& a)
{
    const std::size_t h = a.size() / 2;
    for (std::size_t i = 0; i < h; ++i) std::swap(a[i], a[i + h]);
}

} // namespace cavprot

#endif // CAVPROT_FFT_HPP
