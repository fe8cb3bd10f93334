#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "eulergeom/common.hpp"
#include "eulergeom/distributions.hpp"
#include "eulergeom/fft.hpp"
#include "eulergeom/gas_law.hpp"
#include "eulergeom/quadrature.hpp"
#include "eulergeom/special_functions.hpp"

namespace eulergeom {

// Kernel profile f(s) = (1 - s^2)_+^lambda.
inline SampledFunction profile_f(const GasLaw& law, double L = 8.0, std::size_t n = 1u << 16) {
    return SampledFunction::sample(
        [&](double s) {
            const double a = 1.0 - s * s;
            return a > 0.0 ? std::pow(a, law.lambda) : 0.0;
        },
        L, n);
}

namespace detail {

inline std::vector<double> angular_frequencies(const SampledFunction& f) {
    const std::size_t n = f.size();
    std::vector<double> xi(n);
    const double base = kPi / f.L;
    for (std::size_t k = 0; k < n; ++k) {
        const double ks = (k <= n / 2) ? static_cast<double>(k)
                                       : static_cast<double>(k) - static_cast<double>(n);
        xi[k] = base * ks;
    }
    return xi;
}

}  // namespace detail

struct FracDResult {
    SampledFunction value;
    double spectral_tail_fraction = 0.0;  // energy share of the top input octave

    bool aliased(double threshold = 1e-8) const { return spectral_tail_fraction > threshold; }
};

// d f = F^{-1}( i |xi|^lambda sign(xi) F f ); the multiplier convention makes
// d the classical derivative at lambda = 1. Odd multiplier, so DC and Nyquist
// modes are zeroed.
inline FracDResult frac_d(const SampledFunction& f, double lambda) {
    const std::size_t n = f.size();
    auto spec = fft_forward(f.values);
    const auto xi = detail::angular_frequencies(f);

    double total = 0.0, tail = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double e = std::norm(spec[k]);
        total += e;
        if (std::fabs(xi[k]) > 0.5 * kPi / f.L * (static_cast<double>(n) / 2.0)) tail += e;
    }

    for (std::size_t k = 0; k < n; ++k) {
        if (k == 0 || k == n / 2) {
            spec[k] = 0.0;
            continue;
        }
        const double m = std::pow(std::fabs(xi[k]), lambda);
        spec[k] *= std::complex<double>(0.0, xi[k] > 0 ? m : -m);
    }

    FracDResult out;
    out.value.L = f.L;
    out.value.values = fft_inverse_real(std::move(spec));
    out.spectral_tail_fraction = total > 0.0 ? tail / total : 0.0;
    return out;
}

inline FracDResult frac_d(const SampledFunction& f, const GasLaw& law) {
    return frac_d(f, law.lambda);
}

// plain spectral d/ds
inline SampledFunction spectral_derivative(const SampledFunction& f) {
    const std::size_t n = f.size();
    auto spec = fft_forward(f.values);
    const auto xi = detail::angular_frequencies(f);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == n / 2) {
            spec[k] = 0.0;
            continue;
        }
        spec[k] *= std::complex<double>(0.0, xi[k]);
    }
    SampledFunction out;
    out.L = f.L;
    out.values = fft_inverse_real(std::move(spec));
    return out;
}

// Unitary-convention continuum Fourier transform of the samples at the grid
// frequencies: F f(xi_k) = (1/sqrt(2 pi)) ∫ f e^{-i xi s} ds.
inline std::vector<std::complex<double>> fourier_transform_samples(const SampledFunction& f,
                                                                   std::vector<double>* freqs_out =
                                                                       nullptr) {
    const std::size_t n = f.size();
    auto spec = fft_forward(f.values);
    const auto xi = detail::angular_frequencies(f);
    const double h = f.h();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::complex<double> phase(std::cos(xi[k] * f.L), std::sin(xi[k] * f.L));
        out[k] = spec[k] * phase * (h / std::sqrt(2.0 * kPi));
    }
    if (freqs_out) *freqs_out = xi;
    return out;
}

// Band-limited periodized distributions reconstructed through the same
// spectral pipeline as the data; subtracting them cancels Gibbs artifacts.
namespace detail {

enum class SynthKind { Dirac, PV, Heaviside, CosineIntegral };

inline SampledFunction synth_distribution(SynthKind kind, double c, double L, std::size_t n) {
    std::vector<std::complex<double>> spec(n, {0.0, 0.0});
    SampledFunction grid(L, n);
    const auto xi = angular_frequencies(grid);
    const double scale = static_cast<double>(n) / (2.0 * L);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == n / 2) continue;
        const double w = xi[k];
        std::complex<double> base;
        switch (kind) {
            case SynthKind::Dirac: base = {1.0, 0.0}; break;
            case SynthKind::PV: base = {0.0, w > 0 ? -kPi : (w < 0 ? kPi : 0.0)}; break;
            case SynthKind::Heaviside:
                if (k == 0) continue;                       // ramp handled below
                base = std::complex<double>(0.0, -1.0 / w); // 1/(i w)
                break;
            case SynthKind::CosineIntegral:
                base = {std::fabs(w) > 1.0 ? -kPi / std::fabs(w) : 0.0, 0.0};
                break;
        }
        const std::complex<double> shift(std::cos(w * c), -std::sin(w * c));  // e^{-i w c}
        const std::complex<double> origin(std::cos(w * L), std::sin(w * L)); // e^{+i w L}
        spec[k] = base * shift * origin * scale;
    }
    fft_inplace(spec, true);
    SampledFunction out(L, n);
    for (std::size_t j = 0; j < n; ++j) out.values[j] = spec[j].real();

    if (kind == SynthKind::Heaviside) {
        // periodization turns H into H - s/(2L) + const; undo the ramp and pin
        // the far field H(s* - c) = 0 at a reference point away from atoms/wrap
        const double sref = -0.75 * L;
        double vref = out(sref) + sref / (2.0 * L);
        for (std::size_t j = 0; j < n; ++j)
            out.values[j] += out.x(j) / (2.0 * L) - vref;
    }
    return out;
}

// zero all modes above a fixed fraction of Nyquist; used to strip the
// sampling-alias band from fitted remainders
inline void lowpass(SampledFunction& f, double keep_fraction = 1.0 / 3.0) {
    auto spec = fft_forward(f.values);
    const std::size_t n = f.size();
    const std::size_t kcut = static_cast<std::size_t>(keep_fraction * (n / 2));
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t ks = k <= n / 2 ? k : n - k;
        if (ks > kcut) spec[k] = 0.0;
    }
    f.values = fft_inverse_real(std::move(spec));
}

// dense 8x8 normal-equation solve
inline std::array<double, 8> solve_normal_8(const std::array<std::array<double, 8>, 8>& ata,
                                            const std::array<double, 8>& atb) {
    std::array<std::array<double, 9>, 8> m{};
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) m[i][j] = ata[i][j];
        m[i][8] = atb[i];
    }
    for (int col = 0; col < 8; ++col) {
        int piv = col;
        for (int r = col + 1; r < 8; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        if (std::fabs(m[col][col]) < 1e-300) throw FitDegenerate("expansion fit: singular system");
        for (int r = 0; r < 8; ++r) {
            if (r == col) continue;
            const double fct = m[r][col] / m[col][col];
            for (int j = col; j < 9; ++j) m[r][j] -= fct * m[col][j];
        }
    }
    std::array<double, 8> x{};
    for (int i = 0; i < 8; ++i) x[i] = m[i][8] / m[i][i];
    return x;
}

struct AtomFit {
    double a1, a2, a3, a4;
};

// Coefficients read off the high-frequency asymptotics of the local windowed
// spectrum of D f near the atom at c:
//   P(xi) ~ a1 - i pi a2 + (-i a3 - pi a4)/xi + nuisance
// with nuisance terms 1/xi^2 (remainder) and (xi/xi_max)^{lambda+1} (sampling alias).
inline AtomFit local_expansion_fit(const SampledFunction& Df, double lambda, double c,
                                   double halfwidth = 0.45, double band_lo = 300.0,
                                   double band_hi = 1500.0) {
    const std::size_t n = Df.size();
    SampledFunction windowed(Df.L, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = (Df.x(j) - c) / halfwidth;
        const double w = std::fabs(u) < 1.0 ? std::pow(1.0 - u * u, 4) : 0.0;
        windowed.values[j] = Df.values[j] * w;
    }
    auto spec = fft_forward(windowed.values);
    const auto xi = angular_frequencies(windowed);
    const double h = Df.h();
    const double ximax = kPi / Df.L * (static_cast<double>(n) / 2.0);

    std::array<std::array<double, 8>, 8> ata{};
    std::array<double, 8> atb{};
    std::size_t rows = 0;
    for (std::size_t k = 1; k < n / 2; ++k) {
        const double w = xi[k];
        if (w < band_lo || w > band_hi) continue;
        ++rows;
        // P(xi_k) = h e^{i xi (L + c)} FFT_k
        const double ph = w * (Df.L + c);
        const std::complex<double> P = spec[k] * std::complex<double>(std::cos(ph), std::sin(ph)) * h;
        const double nuis = std::pow(w / ximax, lambda + 1.0);
        const std::complex<double> cols[8] = {
            {1.0, 0.0}, {0.0, -kPi}, {0.0, -1.0 / w}, {-kPi / w, 0.0},
            {1.0 / (w * w), 0.0},    {0.0, 1.0 / (w * w)},
            {nuis, 0.0},             {0.0, nuis},
        };
        for (int i = 0; i < 8; ++i) {
            atb[i] += cols[i].real() * P.real() + cols[i].imag() * P.imag();
            for (int j = 0; j < 8; ++j)
                ata[i][j] += cols[i].real() * cols[j].real() + cols[i].imag() * cols[j].imag();
        }
    }
    if (rows < 32) throw FitDegenerate("expansion fit: band contains too few modes");
    const auto sol = solve_normal_8(ata, atb);
    return {sol[0], sol[1], sol[2], sol[3]};
}

}  // namespace detail

// Fit the singular expansion of d f (and of D f = d/ds d f) from the sampled
// fractional derivative. Estimates come from both atoms; their agreement is a
// consistency check.
inline SingularExpansion fit_expansion(const SampledFunction& df, const GasLaw& law) {
    const SampledFunction Df = spectral_derivative(df);
    const detail::AtomFit fm = detail::local_expansion_fit(Df, law.lambda, -1.0);
    const detail::AtomFit fp = detail::local_expansion_fit(Df, law.lambda, +1.0);

    SingularExpansion out;
    out.a1 = 0.5 * (fm.a1 + fp.a1);
    out.a2 = 0.5 * (fm.a2 - fp.a2);
    out.a3 = 0.5 * (fm.a3 - fp.a3);
    out.a4 = 0.5 * (fm.a4 + fp.a4);

    const double scale =
        std::max({1.0, std::fabs(out.a1), std::fabs(out.a2), std::fabs(out.a3), std::fabs(out.a4)});
    const double disagreement =
        std::max({std::fabs(fm.a1 - fp.a1), std::fabs(fm.a2 + fp.a2), std::fabs(fm.a3 + fp.a3),
                  std::fabs(fm.a4 - fp.a4)});
    if (disagreement > 0.05 * scale)
        throw FitDegenerate("fit_expansion: atom estimates disagree beyond tolerance");

    const std::size_t n = df.size();
    const double L = df.L;
    using detail::SynthKind;
    const SampledFunction Hm = detail::synth_distribution(SynthKind::Heaviside, -1.0, L, n);
    const SampledFunction Hp = detail::synth_distribution(SynthKind::Heaviside, +1.0, L, n);
    const SampledFunction Cm = detail::synth_distribution(SynthKind::CosineIntegral, -1.0, L, n);
    const SampledFunction Cp = detail::synth_distribution(SynthKind::CosineIntegral, +1.0, L, n);

    auto r = std::make_shared<SampledFunction>(L, n);
    for (std::size_t j = 0; j < n; ++j)
        r->values[j] = df.values[j] - out.a1 * (Hm.values[j] + Hp.values[j]) -
                       out.a2 * (Cm.values[j] - Cp.values[j]);
    detail::lowpass(*r);
    out.remainder_d = std::move(r);

    const SampledFunction Dm = detail::synth_distribution(SynthKind::Dirac, -1.0, L, n);
    const SampledFunction Dp = detail::synth_distribution(SynthKind::Dirac, +1.0, L, n);
    const SampledFunction Pm = detail::synth_distribution(SynthKind::PV, -1.0, L, n);
    const SampledFunction Pp = detail::synth_distribution(SynthKind::PV, +1.0, L, n);
    auto q = std::make_shared<SampledFunction>(L, n);
    for (std::size_t j = 0; j < n; ++j)
        q->values[j] = Df.values[j] - out.a1 * (Dm.values[j] + Dp.values[j]) -
                       out.a2 * (Pm.values[j] - Pp.values[j]) -
                       out.a3 * (Hm.values[j] - Hp.values[j]) -
                       out.a4 * (Cm.values[j] + Cp.values[j]);
    // the second derivative amplifies sampling alias by xi^2; keep a low band
    detail::lowpass(*q, 1.0 / 32.0);
    out.remainder_D = std::move(q);
    return out;
}

struct DistributionalDerivative {
    std::vector<SingularTerm> singular;  // Dirac and PV atoms at s = ±1
    SampledFunction regular;             // everything locally integrable
    SingularExpansion expansion;
};

// D f = d/ds (d f); atoms are extracted by the expansion fit, never
// differentiated numerically.
inline DistributionalDerivative frac_D(const SampledFunction& f, const GasLaw& law) {
    const FracDResult df = frac_d(f, law);
    const SingularExpansion fit = fit_expansion(df.value, law);
    const SampledFunction Df = spectral_derivative(df.value);

    DistributionalDerivative out;
    out.expansion = fit;
    out.singular = {SingularTerm::dirac(-1.0, fit.a1), SingularTerm::dirac(+1.0, fit.a1),
                    SingularTerm::pv(-1.0, fit.a2), SingularTerm::pv(+1.0, -fit.a2)};

    const std::size_t n = f.size();
    using detail::SynthKind;
    const SampledFunction Dm = detail::synth_distribution(SynthKind::Dirac, -1.0, f.L, n);
    const SampledFunction Dp = detail::synth_distribution(SynthKind::Dirac, +1.0, f.L, n);
    const SampledFunction Pm = detail::synth_distribution(SynthKind::PV, -1.0, f.L, n);
    const SampledFunction Pp = detail::synth_distribution(SynthKind::PV, +1.0, f.L, n);
    out.regular = SampledFunction(f.L, n);
    for (std::size_t j = 0; j < n; ++j)
        out.regular.values[j] = Df.values[j] - fit.a1 * (Dm.values[j] + Dp.values[j]) -
                                fit.a2 * (Pm.values[j] - Pp.values[j]);
    detail::lowpass(out.regular, 1.0 / 32.0);
    return out;
}

// Explicit g from the inverse sine transform of the Bessel spectrum:
//   |s| < 1: sqrt(2/pi) sign(s) sin((lambda+1/2) arcsin|s|) / sqrt(1-s^2)
//   |s| > 1: sqrt(2/pi) sign(s) cos((lambda+1/2) pi/2) / (sqrt(s^2-1) (|s|+sqrt(s^2-1))^{lambda+1/2})
inline double g_explicit(double s, const GasLaw& law) {
    const double as = std::fabs(s);
    if (std::fabs(as - 1.0) < 1e-12) throw PoleAt1("g_explicit: pole at |s| = 1");
    if (s == 0.0) return 0.0;
    const double nu = law.lambda + 0.5;
    const double sgn = s > 0 ? 1.0 : -1.0;
    const double pref = std::sqrt(2.0 / kPi);
    if (as < 1.0) return pref * sgn * std::sin(nu * std::asin(as)) / std::sqrt(1.0 - as * as);
    const double rt = std::sqrt(as * as - 1.0);
    return pref * sgn * std::cos(nu * kPi / 2.0) / (rt * std::pow(as + rt, nu));
}

namespace detail {

// ∫_a^b f dt where f carries an inverse-square-root singularity at one
// endpoint; Gauss-Jacobi with weight exponent -1/2 there.
template <typename F>
double integrate_endpoint_sqrt(const F& f, double a, double b, bool singular_at_a, int nodes = 32) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    const QuadratureRule* rule;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(nodes);
        if (it == cache.end()) it = cache.emplace(nodes, gauss_jacobi(nodes, 0.0, -0.5)).first;
        rule = &it->second;
    }
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule->nodes.size(); ++k) {
        const double tau = rule->nodes[k];  // weight (1+tau)^{-1/2}
        const double t = singular_at_a ? a + half * (1.0 + tau) : b - half * (1.0 + tau);
        const double dist = singular_at_a ? (t - a) : (b - t);
        sum += rule->weights[k] * f(t) * std::sqrt(dist);
    }
    return sum * std::sqrt(half);
}

}  // namespace detail

// Direct quadrature of the Riesz-potential route |.|^{-1/2} * g with g from
// g_explicit; the independent physical-space evaluation of d f up to one
// multiplicative constant.
inline double riesz_convolution_g(double s, const GasLaw& law, double domain = 4096.0) {
    auto gsafe = [&](double t) {
        if (std::fabs(std::fabs(t) - 1.0) < 1e-13) t += 2e-13;
        return g_explicit(t, law);
    };
    auto integrand = [&](double t) { return gsafe(t) / std::sqrt(std::fabs(s - t)); };

    std::vector<double> brk = {-domain};
    for (double v = 2048.0; v >= 2.0; v *= 0.5) brk.push_back(-v);
    for (double v : {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5}) brk.push_back(v);
    for (double v = 2.0; v <= 2048.0; v *= 2.0) brk.push_back(v);
    brk.push_back(domain);
    brk.push_back(s);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-13; }),
              brk.end());

    auto singular_at = [&](double v) {
        return std::fabs(v - s) < 1e-12 || std::fabs(std::fabs(v) - 1.0) < 1e-12;
    };
    std::function<double(double, double)> panel = [&](double a, double b) -> double {
        if (b - a < 1e-13) return 0.0;
        const bool sa = singular_at(a), sb = singular_at(b);
        if (sa && sb) return panel(a, 0.5 * (a + b)) + panel(0.5 * (a + b), b);
        if (sa) return detail::integrate_endpoint_sqrt(integrand, a, b, true);
        if (sb) return detail::integrate_endpoint_sqrt(integrand, a, b, false);
        return integrate_gl(integrand, a, b, 32);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) total += panel(brk[i], brk[i + 1]);
    return total;
}

// Expansion of the kernel derivatives d chi, D chi at a non-vacuum state.
// Atom weights carry the c_norm normalization of the implemented kernel.
struct KernelExpansion {
    std::vector<SingularTerm> d_terms;  // H/CI atoms plus a Regular payload
    std::vector<SingularTerm> D_terms;  // Dirac/PV/H/CI atoms plus a Regular payload
    double zbar = 0.0, zunder = 0.0;
    SingularExpansion profile;
};

namespace detail {

inline const SingularExpansion& cached_profile_expansion(const GasLaw& law) {
    static std::map<double, SingularExpansion> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(law.lambda);
    if (it == cache.end()) {
        const SampledFunction f = profile_f(law, 8.0, 1u << 17);
        const FracDResult df = frac_d(f, law);
        it = cache.emplace(law.lambda, fit_expansion(df.value, law)).first;
    }
    return it->second;
}

}  // namespace detail

inline KernelExpansion kernel_expansion(const FluidState& w, const GasLaw& law) {
    if (w.vacuum()) throw VacuumState("kernel_expansion: vacuum state has no expansion");
    const SingularExpansion& fit = detail::cached_profile_expansion(law);
    const double ct = std::pow(w.rho, law.theta);           // rho^theta
    const double wd = law.c_norm * std::pow(w.rho, law.theta * law.lambda);
    const double wD1 = wd;                                   // delta/PV weight scale
    const double wD2 = law.c_norm * std::pow(w.rho, law.theta * (law.lambda - 1.0));
    const double zu = w.u - ct, zb = w.u + ct;
    const double u = w.u;

    KernelExpansion out;
    out.zbar = zb;
    out.zunder = zu;
    out.profile = fit;

    const double a1 = fit.a1, a2 = fit.a2, a3 = fit.a3, a4 = fit.a4;
    auto r = fit.remainder_d;
    auto q = fit.remainder_D;

    out.d_terms = {SingularTerm::heaviside(zu, wd * a1), SingularTerm::heaviside(zb, wd * a1),
                   SingularTerm::cosine_int(zu, wd * a2), SingularTerm::cosine_int(zb, -wd * a2)};
    out.d_terms.push_back(SingularTerm::regular(
        [r, a2, ct, u, zu, zb, wd](double s) {
            const double t = (s - u) / ct;
            double val = (*r)(t);
            if (a2 != 0.0)
                val += a2 * (ci_smooth_part((s - zu) / ct) - ci_smooth_part(s - zu) -
                             ci_smooth_part((s - zb) / ct) + ci_smooth_part(s - zb));
            return wd * val;
        },
        1.0));

    out.D_terms = {SingularTerm::dirac(zu, wD1 * a1),   SingularTerm::dirac(zb, wD1 * a1),
                   SingularTerm::pv(zu, wD1 * a2),      SingularTerm::pv(zb, -wD1 * a2),
                   SingularTerm::heaviside(zu, wD2 * a3), SingularTerm::heaviside(zb, -wD2 * a3),
                   SingularTerm::cosine_int(zu, wD2 * a4), SingularTerm::cosine_int(zb, wD2 * a4)};
    const double logterm = -2.0 * std::log(ct);  // = -2 theta log rho
    out.D_terms.push_back(SingularTerm::regular(
        [q, a4, ct, u, zu, zb, wD2, logterm](double s) {
            const double t = (s - u) / ct;
            double val = (*q)(t);
            if (a4 != 0.0)
                val += a4 * (logterm + ci_smooth_part((s - zu) / ct) - ci_smooth_part(s - zu) +
                             ci_smooth_part((s - zb) / ct) - ci_smooth_part(s - zb));
            return wD2 * val;
        },
        1.0));
    return out;
}

}  // namespace eulergeom
