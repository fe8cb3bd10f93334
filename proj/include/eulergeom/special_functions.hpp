#pragma once

#include <cmath>
#include <limits>

#include "eulergeom/common.hpp"

namespace eulergeom {

// ∫_{-1}^{1} (1-t^2)^lam dt = B(1/2, lam+1) = sqrt(pi) Γ(lam+1)/Γ(lam+3/2)
inline double kernel_profile_integral(double lam) {
    return std::exp(0.5 * std::log(kPi) + std::lgamma(lam + 1.0) - std::lgamma(lam + 1.5));
}

namespace detail {

// J_nu by ascending series; accurate for x up to ~18 in double precision.
inline double bessel_j_series(double nu, double x) {
    const double xh = 0.5 * x;
    double term = std::exp(nu * std::log(xh) - std::lgamma(nu + 1.0));
    double sum = term;
    const double x2 = -xh * xh;
    for (int k = 1; k < 80; ++k) {
        term *= x2 / (k * (nu + k));
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum) + 1e-300) break;
    }
    return sum;
}

// Hankel asymptotic expansion, truncated at the smallest term. Good to ~1e-8
// absolute for x >= 16 and nu <= 3.
inline double bessel_j_asymptotic(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::max();
    const double ix8 = 1.0 / (8.0 * x);
    for (int k = 1; k <= 12; ++k) {
        term *= (mu - (2 * k - 1.0) * (2 * k - 1.0)) * ix8 / k;
        double mag = std::fabs(term);
        if (mag > prev) break;
        prev = mag;
        if (k % 2 == 1) {
            q += (k % 4 == 1) ? term : -term;
        } else {
            p += (k % 4 == 2) ? -term : term;
        }
        if (mag < 1e-17) break;
    }
    const double chi = x - (0.5 * nu + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

// Bessel function of the first kind, nu >= 0, x >= 0. Half-integer orders use
// the spherical closed forms, integer and general orders the series below
// x = 18 and the Hankel expansion above.
inline double bessel_j(double nu, double x) {
    if (x < 0.0) throw DomainError("bessel_j: negative argument");
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;

    const double half = nu - std::floor(nu);
    const bool half_integer = std::fabs(half - 0.5) < 1e-12;
    if (half_integer && nu < 3.6 && x > 0.1) {
        // j_n spherical: J_{n+1/2}(x) = sqrt(2x/pi) j_n(x)
        const int n = static_cast<int>(std::floor(nu));
        const double s = std::sin(x), c = std::cos(x);
        double jn;
        switch (n) {
            case 0: jn = s / x; break;
            case 1: jn = s / (x * x) - c / x; break;
            case 2: jn = (3.0 / (x * x * x) - 1.0 / x) * s - 3.0 * c / (x * x); break;
            default: {
                // upward recurrence from j_2; stable for the small n used here
                double jm1 = s / (x * x) - c / x;
                double jm2 = (3.0 / (x * x * x) - 1.0 / x) * s - 3.0 * c / (x * x);
                double j = jm2;
                for (int m = 3; m <= n; ++m) {
                    j = (2.0 * m - 1.0) / x * jm2 - jm1;
                    jm1 = jm2;
                    jm2 = j;
                }
                jn = j;
            }
        }
        return std::sqrt(2.0 * x / kPi) * jn;
    }
    if (x < 18.0) return detail::bessel_j_series(nu, x);
    return detail::bessel_j_asymptotic(nu, x);
}

namespace detail {

// CI(x) = gamma + log x + Σ_{k>=1} (-1)^k x^{2k} / (2k (2k)!); long double
// accumulation keeps the cancellation loss below ~1e-9 up to x = 20.
inline double ci_series(double x) {
    long double sum = 0.0L;
    long double term = 1.0L;
    const long double x2 = static_cast<long double>(x) * x;
    for (int k = 1; k <= 80; ++k) {
        term *= x2 / ((2.0L * k - 1.0L) * (2.0L * k));
        long double add = term / (2.0L * k);
        sum += (k % 2 == 1) ? -add : add;
        if (std::fabs(static_cast<double>(add)) <
            1e-20 * (1.0 + std::fabs(static_cast<double>(sum))))
            break;
    }
    return kEulerGamma + std::log(x) + static_cast<double>(sum);
}

// CI(x) = f(x) sin x - g(x) cos x; both sums truncated at their smallest term.
inline double ci_asymptotic(double x) {
    const double ix2 = 1.0 / (x * x);
    double f = 1.0, g = 1.0;
    double tf = 1.0, tg = 1.0;
    double prev_f = 1e300, prev_g = 1e300;
    bool done_f = false, done_g = false;
    for (int k = 1; k <= 24 && !(done_f && done_g); ++k) {
        tf *= (2.0 * k) * (2.0 * k - 1.0) * ix2;
        tg *= (2.0 * k) * (2.0 * k + 1.0) * ix2;
        if (!done_f) {
            if (tf >= prev_f) {
                done_f = true;
            } else {
                f += (k % 2 == 1) ? -tf : tf;
                prev_f = tf;
            }
        }
        if (!done_g) {
            if (tg >= prev_g) {
                done_g = true;
            } else {
                g += (k % 2 == 1) ? -tg : tg;
                prev_g = tg;
            }
        }
    }
    return (f / x) * std::sin(x) - (g * ix2) * std::cos(x);
}

}  // namespace detail

// Cosine integral  CI(s) = -∫_{|s|}^∞ cos t / t dt  (even in s).
// Power series below 20, asymptotic trigonometric expansion beyond.
inline double cosine_integral(double s) {
    double x = std::fabs(s);
    if (x < 1e-300) throw PoleAt0("cosine_integral: argument too close to 0");
    return x <= 20.0 ? detail::ci_series(x) : detail::ci_asymptotic(x);
}

// Smooth part of the cosine integral: CI(s) = gamma + log|s| + ci_smooth(s),
// ci_smooth(s) = ∫_0^{|s|} (cos t - 1)/t dt. Entire and even.
inline double ci_smooth_part(double s) {
    double x = std::fabs(s);
    if (x == 0.0) return 0.0;
    if (x <= 16.0) {
        long double sum = 0.0L;
        long double term = 1.0L;
        const long double x2 = static_cast<long double>(x) * x;
        for (int k = 1; k <= 60; ++k) {
            term *= x2 / ((2.0L * k - 1.0L) * (2.0L * k));
            long double add = term / (2.0L * k);
            sum += (k % 2 == 1) ? -add : add;
            if (std::fabs(static_cast<double>(add)) < 1e-20 * (1.0 + std::fabs(static_cast<double>(sum)))) break;
        }
        return static_cast<double>(sum);
    }
    return cosine_integral(x) - kEulerGamma - std::log(x);
}

// Standard normal CDF, used for Gaussian-mollified comparisons.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }

}  // namespace eulergeom
