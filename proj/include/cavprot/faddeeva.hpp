#ifndef CAVPROT_FADDEEVA_HPP
#define CAVPROT_FADDEEVA_HPP

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "fft.hpp"
#include "units.hpp"

namespace cavprot {

namespace detail {

// Rational-series coefficients for w(z) on the closed upper half-plane
// (Weideman 1994, SIAM J. Numer. Anal. 31, 1497). Computed once from an FFT
// of the mapped Gaussian.
template <int N = 64>
inline const std::array<double, N>& faddeeva_coeffs()
{
    static const std::array<double, N> coeffs = [] {
        constexpr int M = 2 * N;
        constexpr int M2 = 4 * N;
        const double L = std::sqrt(N / std::sqrt(2.0));

        std::vector<std::complex<double>> f(M2, 0.0);
        for (int j = 1; j < M2; ++j) {
            const int k = j - M;
            const double theta = k * pi / M;
            if (std::abs(std::abs(theta) - pi) < 1e-15) continue;
            const double t = L * std::tan(theta / 2.0);
            f[j] = std::exp(-t * t) * (L * L + t * t);
        }
        fftshift(f);
        fft_inplace(f, false);

        std::array<double, N> c{};
        for (int j = 0; j < N; ++j)
            c[j] = f[N - j].real() / M2; // highest degree first
        return c;
    }();
    return coeffs;
}

inline std::complex<double> faddeeva_upper(std::complex<double> z)
{
    constexpr int N = 64;
    const auto& a = faddeeva_coeffs<N>();
    const double L = std::sqrt(N / std::sqrt(2.0));
    const std::complex<double> iz(-z.imag(), z.real());
    const std::complex<double> d = L - iz;
    const std::complex<double> Z = (L + iz) / d;
    std::complex<double> p = 0.0;
    for (int j = 0; j < N; ++j) p = p * Z + a[j];
    return 2.0 * p / (d * d) + (1.0 / std::sqrt(pi)) / d;
}

} // namespace detail

// Faddeeva function w(z) = exp(-z^2) erfc(-iz), entire.
// For Im z < 0 uses the reflection w(z) = 2 exp(-z^2) - w(-z).
inline std::complex<double> faddeeva(std::complex<double> z)
{
    if (z.imag() >= 0.0) return detail::faddeeva_upper(z);
    return 2.0 * std::exp(-z * z) - detail::faddeeva_upper(-z);
}

// d/dz w(z) = -2 z w(z) + 2i/sqrt(pi)
inline std::complex<double> faddeeva_deriv(std::complex<double> z)
{
    return -2.0 * z * faddeeva(z) + std::complex<double>(0.0, 2.0 / std::sqrt(pi));
}

} // namespace cavprot

#endif // CAVPROT_FADDEEVA_HPP
