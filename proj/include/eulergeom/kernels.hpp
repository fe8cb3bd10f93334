#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "eulergeom/common.hpp"
#include "eulergeom/entropy_weight.hpp"
#include "eulergeom/gas_law.hpp"
#include "eulergeom/quadrature.hpp"

namespace eulergeom {

// Entropy kernel chi(s | rho, u) = c_norm (rho^{2 theta} - (s-u)^2)_+^lambda.
// Support is [u - rho^theta, u + rho^theta]; identically zero at vacuum.
inline double chi(double s, const FluidState& w, const GasLaw& law) {
    if (w.vacuum()) return 0.0;
    const double r2t = std::pow(w.rho, 2.0 * law.theta);
    const double arg = r2t - (s - w.u) * (s - w.u);
    if (arg <= 0.0) return 0.0;
    return law.c_norm * std::pow(arg, law.lambda);
}

// Entropy-flux kernel sigma = (theta s + (1-theta) u) chi.
inline double sigma(double s, const FluidState& w, const GasLaw& law) {
    const double k = chi(s, w, law);
    if (k == 0.0) return 0.0;
    return (law.theta * s + (1.0 - law.theta) * w.u) * k;
}

inline std::array<double, 2> kernel_support(const FluidState& w, const GasLaw& law) {
    const double c = std::pow(w.rho, law.theta);
    return {w.u - c, w.u + c};
}

// Analytic moment matrix: rows are the weights {1, s, s^2/2} integrated
// against (chi, sigma).
//   [ rho                   rho u                  ]
//   [ rho u                 rho u^2 + P            ]
//   [ rho u^2/2 + U         (rho u^2/2 + Q) u      ]
struct MomentMatrix {
    double m[3][2];
};

inline MomentMatrix moment_matrix(const FluidState& w, const GasLaw& law) {
    MomentMatrix out{};
    if (w.vacuum()) return out;
    const double rho = w.rho, u = w.u;
    const double P = law.pressure(rho);
    const double U = law.internal_energy(rho);
    const double Q = law.energy_flux_potential(rho);
    out.m[0][0] = rho;
    out.m[0][1] = rho * u;
    out.m[1][0] = rho * u;
    out.m[1][1] = rho * u * u + P;
    out.m[2][0] = 0.5 * rho * u * u + U;
    out.m[2][1] = (0.5 * rho * u * u + Q) * u;
    return out;
}

struct EntropyPair {
    double eta = 0.0;
    double q = 0.0;
};

namespace detail {

// eta closed forms: ∫ s^k chi ds for k = 0, 1, 2, 3 (normalized kernel).
inline std::array<double, 4> chi_power_moments(const FluidState& w, const GasLaw& law) {
    const double rho = w.rho, u = w.u;
    const double twoU = 2.0 * law.internal_energy(rho);   // ∫ (s-u)^2 chi ds
    const double m0 = rho;
    const double m1 = rho * u;
    const double m2 = rho * u * u + twoU;
    const double m3 = rho * u * u * u + 3.0 * u * twoU;
    return {m0, m1, m2, m3};
}

}  // namespace detail

// ∫ F(s) chi(s) ds via the angle substitution s = u + rho^theta sin(phi),
// which removes the (1 - t^2)^lambda endpoint singularity analytically:
//   ∫ F chi ds = c_norm rho ∫_{-pi/2}^{pi/2} F(u + rho^theta sin phi) cos^{2 lambda + 1}(phi) dphi.
// Adaptive quadrature splits at the phi-images of the supplied kink points.
template <typename F>
double chi_weighted_integral(const F& f, const FluidState& w, const GasLaw& law,
                             const std::vector<double>& kinks = {}, double tol = 1e-12) {
    if (w.vacuum()) return 0.0;
    const double ct = std::pow(w.rho, law.theta);
    const double expnt = 2.0 * law.lambda + 1.0;

    std::vector<double> breaks = {-0.5 * kPi};
    for (double k : kinks) {
        const double t = (k - w.u) / ct;
        if (t > -1.0 + 1e-14 && t < 1.0 - 1e-14) breaks.push_back(std::asin(t));
    }
    breaks.push_back(0.5 * kPi);
    std::sort(breaks.begin(), breaks.end());

    auto integrand = [&](double phi) {
        const double c = std::cos(phi);
        return f(w.u + ct * std::sin(phi)) * std::pow(c, expnt);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        total += adaptive_simpson(integrand, breaks[i], breaks[i + 1], tol);
    return law.c_norm * w.rho * total;
}

// Entropy/entropy-flux pair (eta_psi, q_psi) = ∫ psi(s) (chi, sigma) ds.
// Polynomial weights use closed moments; everything else integrates over the
// kernel support with Gauss-Jacobi matched to the endpoint exponent, falling
// back to adaptive Simpson when psi has kinks inside the support.
inline EntropyPair entropy_pair(const EntropyWeight& psi, const FluidState& w, const GasLaw& law,
                                int jacobi_nodes = 48) {
    EntropyPair out;
    if (w.vacuum()) return out;

    if (psi.has_closed_moments()) {
        const auto m = detail::chi_power_moments(w, law);
        const double a = psi.coeff_const(), b = psi.coeff_lin(), c = psi.coeff_quad();
        out.eta = a * m[0] + b * m[1] + c * m[2];
        // ∫ s^k sigma ds = theta m_{k+1} + (1-theta) u m_k
        const double th = law.theta, u = w.u;
        const double q0 = th * m[1] + (1.0 - th) * u * m[0];
        const double q1 = th * m[2] + (1.0 - th) * u * m[1];
        const double q2 = th * m[3] + (1.0 - th) * u * m[2];
        out.q = a * q0 + b * q1 + c * q2;
        return out;
    }

    const auto sup = kernel_support(w, law);
    const double ct = std::pow(w.rho, law.theta);

    // kinks of psi strictly inside the kernel support force the Simpson path
    std::vector<double> inner;
    for (double k : psi.kinks())
        if (k > sup[0] + 1e-14 && k < sup[1] - 1e-14) inner.push_back(k);

    if (inner.empty()) {
        // substitution s = u + ct * t gives smooth psi against the (1-t^2)^lambda weight
        const QuadratureRule rule = gauss_jacobi(jacobi_nodes, law.lambda, law.lambda);
        const double scale = law.c_norm * w.rho;  // c_norm * rho^{theta(2 lambda + 1)}
        double eta = 0.0, q = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double s = w.u + ct * rule.nodes[k];
            const double ps = psi(s);
            const double mult = law.theta * s + (1.0 - law.theta) * w.u;
            eta += rule.weights[k] * ps;
            q += rule.weights[k] * ps * mult;
        }
        out.eta = scale * eta;
        out.q = scale * q;
        return out;
    }

    const double tol = 1e-12 * std::max(1.0, w.rho * (1.0 + w.u * w.u));
    out.eta = chi_weighted_integral([&](double s) { return psi(s); }, w, law, inner, tol);
    out.q = chi_weighted_integral(
        [&](double s) { return psi(s) * (law.theta * s + (1.0 - law.theta) * w.u); }, w, law,
        inner, tol);
    return out;
}

// rho u eta_{psi,rho} evaluated through the kernel identity
//   rho u eta_{psi,rho} = u ∫ psi chi ds + theta u ∫ psi'(s) (s-u) chi ds,
// needed by the entropy-inequality residual.
inline double rho_u_eta_rho(const EntropyWeight& psi, const FluidState& w, const GasLaw& law,
                            int jacobi_nodes = 48) {
    if (w.vacuum() || w.u == 0.0) return 0.0;
    const auto sup = kernel_support(w, law);
    const double ct = std::pow(w.rho, law.theta);

    std::vector<double> inner;
    for (double k : psi.kinks())
        if (k > sup[0] + 1e-14 && k < sup[1] - 1e-14) inner.push_back(k);

    if (inner.empty()) {
        const QuadratureRule rule = gauss_jacobi(jacobi_nodes, law.lambda, law.lambda);
        const double scale = law.c_norm * w.rho;
        double base = 0.0, grad = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double s = w.u + ct * rule.nodes[k];
            base += rule.weights[k] * psi(s);
            grad += rule.weights[k] * psi.deriv(s) * (s - w.u);
        }
        return w.u * scale * base + law.theta * w.u * scale * grad;
    }

    const double tol = 1e-12 * std::max(1.0, w.rho * (1.0 + w.u * w.u));
    const double base = chi_weighted_integral([&](double s) { return psi(s); }, w, law, inner, tol);
    const double grad = chi_weighted_integral(
        [&](double s) { return psi.deriv(s) * (s - w.u); }, w, law, inner, tol);
    return w.u * base + law.theta * w.u * grad;
}

}  // namespace eulergeom
