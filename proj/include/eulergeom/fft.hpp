#pragma once

#include <complex>
#include <vector>

#include "eulergeom/common.hpp"

namespace eulergeom {

// In-place iterative radix-2 FFT; size must be a power of two. Twiddles come
// from a direct-trig table: iterated twiddle products would accumulate O(n eps)
// phase error, which spectral multipliers like |xi|^{lambda+1} then amplify.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw DomainError("fft: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<std::complex<double>> tw(n / 2);
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = sgn * 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        tw[k] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * tw[k * stride];
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv;
    }
}

inline std::vector<std::complex<double>> fft_forward(const std::vector<double>& x) {
    std::vector<std::complex<double>> a(x.begin(), x.end());
    fft_inplace(a, false);
    return a;
}

inline std::vector<double> fft_inverse_real(std::vector<std::complex<double>> a) {
    fft_inplace(a, true);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].real();
    return out;
}

}  // namespace eulergeom
