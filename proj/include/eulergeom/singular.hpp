#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "eulergeom/common.hpp"
#include "eulergeom/distributions.hpp"
#include "eulergeom/fraccalc.hpp"
#include "eulergeom/kernels.hpp"
#include "eulergeom/measure.hpp"
#include "eulergeom/quadrature.hpp"
#include "eulergeom/special_functions.hpp"

namespace eulergeom {

// Polynomial mollifier 630 (x-a)^4 (b-x)^4 on [a, b] with b - a = 1; unit mass.
struct Bump {
    double a;
    double b;

    double operator()(double x) const {
        if (x <= a || x >= b) return 0.0;
        const double p = x - a, q = b - x;
        const double pq = p * q;
        const double pq2 = pq * pq;
        return 630.0 * pq2 * pq2;
    }

    double cdf(double x) const {
        if (x <= a) return 0.0;
        if (x >= b) return 1.0;
        // ∫_a^x 630 (t-a)^4 (b-t)^4 dt with u = t-a, width 1
        const double u = x - a;
        // expand (1-u)^4 u^4 and integrate termwise
        const double u5 = std::pow(u, 5);
        return 630.0 * u5 * (1.0 / 5.0 - 4.0 * u / 6.0 + 6.0 * u * u / 7.0 -
                             4.0 * u * u * u / 8.0 + u * u * u * u / 9.0);
    }

    // first moment of the density: ∫ v phi(v) dv
    double mean() const { return 0.5 * (a + b); }

    // ∫_a^y v phi(v) dv
    double partial_first_moment(double y) const {
        if (y <= a) return 0.0;
        if (y >= b) return mean();
        const double u = y - a;
        // v = a + u; ∫ (a+u) phi du = a cdf + ∫ u phi du
        const double u6 = std::pow(u, 6);
        const double m = 630.0 * u6 * (1.0 / 6.0 - 4.0 * u / 7.0 + 6.0 * u * u / 8.0 -
                                       4.0 * u * u * u / 9.0 + u * u * u * u / 10.0);
        return a * cdf(y) + m;
    }

    // polynomial coefficients of v -> phi(y - v) around v = 0 (degree 8)
    void shifted_coefficients(double y, double out[9]) const {
        // phi(y - v) = 630 ((y-a) - v)^4 ((b-y) + v)^4
        const double al = y - a, be = b - y;
        double pa[5], pb[5];
        // (al - v)^4 = Σ C(4,i) al^{4-i} (-v)^i ; (be + v)^4 = Σ C(4,j) be^{4-j} v^j
        const double c4[5] = {1, 4, 6, 4, 1};
        for (int i = 0; i <= 4; ++i) {
            pa[i] = c4[i] * std::pow(al, 4 - i) * ((i % 2) ? -1.0 : 1.0);
            pb[i] = c4[i] * std::pow(be, 4 - i);
        }
        for (int k = 0; k <= 8; ++k) out[k] = 0.0;
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j <= 4; ++j) out[i + j] += pa[i] * pb[j];
        for (int k = 0; k <= 8; ++k) out[k] *= 630.0;
    }
};

// The canonical pair: disjoint supports [0,1] and [-1,0] make the commutator
// constant Z equal to one exactly.
struct MollifierPair {
    Bump phi{0.0, 1.0};
    Bump phi_prime{-1.0, 0.0};

    static constexpr double Z = 1.0;

    // Z evaluated from its defining double integral (verification path).
    double Z_quadrature(int nodes = 48) const {
        const QuadratureRule& r = cached_legendre(nodes);
        auto map = [](double tau, double lo, double hi) {
            return 0.5 * (lo + hi) + 0.5 * (hi - lo) * tau;
        };
        double total = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            const double t = map(r.nodes[i], phi.a, phi.b);
            for (std::size_t j = 0; j < r.nodes.size(); ++j) {
                const double s = map(r.nodes[j], phi_prime.a, phi_prime.b);
                const double H1 = t > s ? 1.0 : (t == s ? 0.5 : 0.0);
                total += r.weights[i] * r.weights[j] * H1 * phi(t) * phi_prime(s);
            }
        }
        double total2 = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            const double t = map(r.nodes[i], phi_prime.a, phi_prime.b);
            for (std::size_t j = 0; j < r.nodes.size(); ++j) {
                const double s = map(r.nodes[j], phi.a, phi.b);
                const double H1 = t > s ? 1.0 : (t == s ? 0.5 : 0.0);
                total2 += r.weights[i] * r.weights[j] * H1 * phi(s) * phi_prime(t);
            }
        }
        const double jac = 0.25 * (phi.b - phi.a) * (phi_prime.b - phi_prime.a);
        return (total - total2) * jac;
    }
};

namespace detail {

// The termwise-exact polynomial expansions below cancel catastrophically once
// the window sits far from the singular point (coefficients grow like y^8), so
// traces switch to plain Gauss-Legendre when 0 is safely outside the window.
inline bool window_away_from_origin(const Bump& mol, double y) {
    return (y - mol.b) > 0.25 || (y - mol.a) < -0.25;
}

// PV ∫ phi(y - v)/v dv over the support window; exact through the polynomial
// expansion near the origin (log term for k = 0, power differences otherwise).
inline double pv_trace_scaled(const Bump& mol, double y) {
    const double v1 = y - mol.b, v2 = y - mol.a;
    if (v2 <= v1) return 0.0;
    if (window_away_from_origin(mol, y))
        return integrate_gl([&](double v) { return mol(y - v) / v; }, v1, v2, 24);
    double c[9];
    mol.shifted_coefficients(y, c);
    double total = 0.0;
    if (std::min(std::fabs(v1), std::fabs(v2)) > 1e-14) {
        total += c[0] * std::log(std::fabs(v2 / v1));
    }  // else phi(y) vanishes at the support edge; the log term is zero in the limit
    double p1 = v1, p2 = v2;
    for (int k = 1; k <= 8; ++k) {
        total += c[k] * (p2 - p1) / k;
        p1 *= v1;
        p2 *= v2;
    }
    return total;
}

// ∫ ln|v| phi(y - v) dv over the support window.
inline double log_trace_scaled(const Bump& mol, double y) {
    const double v1 = y - mol.b, v2 = y - mol.a;
    if (v2 <= v1) return 0.0;
    if (window_away_from_origin(mol, y))
        return integrate_gl([&](double v) { return mol(y - v) * std::log(std::fabs(v)); }, v1, v2,
                            24);
    double c[9];
    mol.shifted_coefficients(y, c);
    auto F = [](double v, int k) {
        // ∫ v^k ln|v| dv = v^{k+1}/(k+1) (ln|v| - 1/(k+1))
        if (v == 0.0) return 0.0;
        const double p = std::pow(v, k + 1);
        return p / (k + 1.0) * (std::log(std::fabs(v)) - 1.0 / (k + 1.0));
    };
    double total = 0.0;
    for (int k = 0; k <= 8; ++k) total += c[k] * (F(v2, k) - F(v1, k));
    return total;
}

// ∫ v ln|v| phi(y - v) dv (degree 9)
inline double vlog_trace_scaled(const Bump& mol, double y) {
    const double v1 = y - mol.b, v2 = y - mol.a;
    if (v2 <= v1) return 0.0;
    if (window_away_from_origin(mol, y))
        return integrate_gl([&](double v) { return v * mol(y - v) * std::log(std::fabs(v)); }, v1,
                            v2, 24);
    double c[9];
    mol.shifted_coefficients(y, c);
    auto F = [](double v, int k) {
        if (v == 0.0) return 0.0;
        const double p = std::pow(v, k + 1);
        return p / (k + 1.0) * (std::log(std::fabs(v)) - 1.0 / (k + 1.0));
    };
    double total = 0.0;
    for (int k = 0; k <= 8; ++k) total += c[k] * (F(v2, k + 1) - F(v1, k + 1));
    return total;
}

}  // namespace detail

// Mollified trace (T * mol_eps)(t) for a singular term T.
inline double trace(const SingularTerm& T, const Bump& mol, double eps, double t) {
    const double x = t - T.location;
    const double y = x / eps;
    switch (T.kind) {
        case AtomKind::Dirac:
            return T.coefficient * mol(y) / eps;
        case AtomKind::Heaviside:
            return T.coefficient * mol.cdf(y);
        case AtomKind::PV:
            return T.coefficient * detail::pv_trace_scaled(mol, y) / eps;
        case AtomKind::CosineIntegral: {
            // CI(eps v) = gammaE + ln eps + ln|v| + h(eps v); the log part is
            // exact termwise, the entire part h via Gauss-Legendre
            const double lg = detail::log_trace_scaled(mol, y);
            const double smooth = integrate_gl(
                [&](double v) { return ci_smooth_part(eps * v) * mol(y - v); }, y - mol.b,
                y - mol.a, 24);
            return T.coefficient * (kEulerGamma + std::log(eps) + lg + smooth);
        }
        case AtomKind::Regular: {
            const double val = integrate_gl(
                [&](double u) { return T.payload(t - eps * u) * mol(u); }, mol.a, mol.b, 16);
            return T.coefficient * val;
        }
    }
    return 0.0;
}

// Weighted trace ∫ (t - s) T(s) mol_eps(t - s) ds.
inline double trace_weighted(const SingularTerm& T, const Bump& mol, double eps, double t) {
    const double x = t - T.location;
    const double y = x / eps;
    switch (T.kind) {
        case AtomKind::Dirac:
            return T.coefficient * x * mol(y) / eps;
        case AtomKind::Heaviside:
            return T.coefficient * eps * mol.partial_first_moment(y);
        case AtomKind::PV: {
            // ∫ ((t-c) - v) phi_eps(x - v)/v dv = x p(t) - ∫ phi_eps = x p - 1
            // (the v-range always covers the whole mollifier support)
            const double p = detail::pv_trace_scaled(mol, y) / eps;
            return T.coefficient * (x * p - 1.0);
        }
        case AtomKind::CosineIntegral: {
            // ∫ (x - w) CI(w) phi_eps(x - w) dw, scaled w = eps v
            const double cdfstub = kEulerGamma + std::log(eps);
            const double lg = detail::log_trace_scaled(mol, y);
            const double vlg = detail::vlog_trace_scaled(mol, y);
            const double smooth = integrate_gl(
                [&](double v) { return (y - v) * ci_smooth_part(eps * v) * mol(y - v); },
                y - mol.b, y - mol.a, 24);
            // ∫ (y - v)(gammaE + ln eps) phi(y-v) dv = (gammaE + ln eps) * mean moment
            const double m1 = mol.mean();
            return T.coefficient * eps * (cdfstub * m1 + (y * lg - vlg) + smooth);
        }
        case AtomKind::Regular: {
            const double val = integrate_gl(
                [&](double u) { return u * T.payload(t - eps * u) * mol(u); }, mol.a, mol.b, 16);
            return T.coefficient * eps * val;
        }
    }
    return 0.0;
}

// Smooth compactly supported test function with quadrature metadata.
struct TestFunction {
    std::function<double(double)> f;
    double lo = -2.0;
    double hi = 2.0;
    std::vector<double> features;  // additional quadrature breakpoints

    static TestFunction bump(double center = 0.0, double halfwidth = 1.0) {
        TestFunction g;
        g.lo = center - halfwidth;
        g.hi = center + halfwidth;
        g.f = [center, halfwidth](double t) {
            const double u = (t - center) / halfwidth;
            if (std::fabs(u) >= 1.0) return 0.0;
            const double w = 1.0 - u * u;
            return w * w * w * w;
        };
        return g;
    }
};

namespace detail {

inline std::vector<double> outer_breakpoints(const TestFunction& g,
                                             const std::vector<double>& atom_locations,
                                             double eps) {
    std::vector<double> brk = {g.lo, g.hi};
    for (double f : g.features)
        if (f > g.lo && f < g.hi) brk.push_back(f);
    for (double c : atom_locations) {
        for (int k = -8; k <= 8; ++k) {
            const double t = c + 0.5 * eps * k;
            if (t > g.lo && t < g.hi) brk.push_back(t);
        }
    }
    // global fill so no panel is wider than (hi-lo)/24
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
    std::vector<double> out;
    const double cap = (g.hi - g.lo) / 24.0;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        out.push_back(brk[i]);
        const double w = brk[i + 1] - brk[i];
        if (w > cap) {
            const int parts = static_cast<int>(std::ceil(w / cap));
            for (int p = 1; p < parts; ++p) out.push_back(brk[i] + w * p / parts);
        }
    }
    out.push_back(brk.back());
    return out;
}

}  // namespace detail

// ∬ Phi_eps(s,s') [T(s) T'(s') - T'(s) T(s')] ds ds' with
// Phi_eps(s,s') = ∫ g(t) phi_eps(t-s) phi'_eps(t-s') dt. The double pairing
// separates into mollified traces against each bump.
inline double phi_eps_pairing(const SingularTerm& T, const SingularTerm& Tp, const TestFunction& g,
                              double eps, const MollifierPair& mol = MollifierPair{}) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("phi_eps_pairing: eps must lie in (0,1)");
    auto integrand = [&](double t) {
        const double a1 = trace(T, mol.phi, eps, t);
        const double b1 = trace(Tp, mol.phi_prime, eps, t);
        const double a2 = trace(Tp, mol.phi, eps, t);
        const double b2 = trace(T, mol.phi_prime, eps, t);
        return g.f(t) * (a1 * b1 - a2 * b2);
    };
    const auto brk = detail::outer_breakpoints(g, {T.location, Tp.location}, eps);
    return integrate_panels(integrand, brk, 16);
}

// ∬ (s - s') Phi_eps(s,s') T(s) T'(s') ds ds'
// = ∫ g(t) [ -(T*w phi_eps)(t) (T'*phi'_eps)(t) + (T*phi_eps)(t) (T'*w phi'_eps)(t) ] dt.
inline double weighted_pairing(const SingularTerm& T, const SingularTerm& Tp,
                               const TestFunction& g, double eps,
                               const MollifierPair& mol = MollifierPair{}) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("weighted_pairing: eps must lie in (0,1)");
    auto integrand = [&](double t) {
        const double tw = trace_weighted(T, mol.phi, eps, t);
        const double tp = trace(Tp, mol.phi_prime, eps, t);
        const double tt = trace(T, mol.phi, eps, t);
        const double tpw = trace_weighted(Tp, mol.phi_prime, eps, t);
        return g.f(t) * (-tw * tp + tt * tpw);
    };
    const auto brk = detail::outer_breakpoints(g, {T.location, Tp.location}, eps);
    return integrate_panels(integrand, brk, 16);
}

struct Extrapolation {
    double limit = 0.0;
    double uncertainty = 0.0;
};

// Richardson extrapolation of a geometric eps-ladder assuming leading error
// C eps^beta with beta fitted from successive differences.
inline Extrapolation eps_extrapolate(const std::vector<std::pair<double, double>>& ladder) {
    if (ladder.size() < 4) throw DomainError("eps_extrapolate: need >= 4 ladder points");
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
        if (ladder[i + 1].first >= ladder[i].first)
            throw DomainError("eps_extrapolate: eps must decrease along the ladder");

    const std::size_t n = ladder.size();
    std::vector<double> d(n - 1);
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        d[i] = ladder[i].second - ladder[i + 1].second;
        scale = std::max(scale, std::fabs(ladder[i].second));
    }
    scale = std::max(scale, std::fabs(ladder.back().second));

    // converged ladder: differences at rounding level
    double dmax = 0.0;
    for (double v : d) dmax = std::max(dmax, std::fabs(v));
    if (dmax <= 1e-12 * std::max(1.0, scale)) return {ladder.back().second, dmax};
    if (std::fabs(d[n - 2]) <= 1e-11 * std::max(1.0, scale))
        return {ladder.back().second, std::fabs(d[n - 2])};

    // sustained growth of the tail differences signals divergence
    if (n >= 4 && std::fabs(d[n - 2]) > 2.0 * std::fabs(d[n - 3]) &&
        std::fabs(d[n - 3]) > 2.0 * std::fabs(d[n - 4]) &&
        std::fabs(d[n - 2]) > 1e-6 * std::max(1.0, scale))
        throw NoConvergence("eps_extrapolate: ladder differences grow");

    const double ratio = ladder[1].first / ladder[0].first;  // < 1
    // median of the fitted decay exponents
    std::vector<double> betas;
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        if (std::fabs(d[i]) < 1e-14 * std::max(1.0, scale) ||
            std::fabs(d[i + 1]) < 1e-14 * std::max(1.0, scale))
            continue;
        const double q = d[i + 1] / d[i];
        if (q <= 0.0 || q >= 1.0) continue;
        betas.push_back(std::log(q) / std::log(ratio));
    }
    if (betas.empty()) return {ladder.back().second, std::fabs(d[n - 2])};
    std::sort(betas.begin(), betas.end());
    const double beta = betas[betas.size() / 2];
    const double rb = std::pow(ratio, beta);

    // v_k = v_inf + a eps_k^beta; last difference d_{n-2} = a eps_{n-2}^beta (1 - rb)
    const double tail_correction = d[n - 2] * rb / (1.0 - rb);
    const double limit = ladder.back().second - tail_correction;

    double resid = 0.0;
    // self-consistency of the geometric model across the ladder
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double predicted = d[i] * rb;
        resid = std::max(resid, std::fabs(predicted - d[i + 1]));
    }
    return {limit, std::max(resid, std::fabs(tail_correction) * 0.25)};
}

struct ReductionIntegrals {
    double lhs = 0.0;   // ∫ <D chi_e D sigma'_e - D sigma_e D chi'_e> <chi> zeta dt
    double rhs1 = 0.0;  // ∫ <chi D sigma'_e - sigma D chi'_e> <D chi_e> zeta dt
    double rhs2 = 0.0;  // ∫ <chi D sigma_e - sigma D chi_e> <D chi'_e> zeta dt
};

namespace detail {

struct AtomTraceSet {
    // traces of d chi and D chi for one measure atom against one mollifier
    double dchi = 0.0;
    double Dchi = 0.0;
    double Dchi_w = 0.0;  // weighted trace of D chi
};

inline AtomTraceSet atom_traces(const KernelExpansion& ke, const Bump& mol, double eps, double t) {
    AtomTraceSet out;
    for (const SingularTerm& T : ke.d_terms) out.dchi += trace(T, mol, eps, t);
    for (const SingularTerm& T : ke.D_terms) {
        out.Dchi += trace(T, mol, eps, t);
        out.Dchi_w += trace_weighted(T, mol, eps, t);
    }
    return out;
}

// D sigma trace from D chi / d chi traces:
//   D sigma = theta [ s D chi + (lambda+1) d chi ] + (1-theta) u D chi
//   (s T * mol)(t) = t (T * mol)(t) - (T * w mol)(t)
inline double dsigma_trace(const AtomTraceSet& tr, double t, double u, const GasLaw& law) {
    const double sDchi = t * tr.Dchi - tr.Dchi_w;
    return law.theta * (sDchi + (law.lambda + 1.0) * tr.dchi) + (1.0 - law.theta) * u * tr.Dchi;
}

}  // namespace detail

// The three eps-regularized integrals whose limits drive the Young-measure
// reduction. For an admissible measure, rhs1 - rhs2 -> 0 and lhs -> a positive
// multiple of Σ rho^{1-theta} ( <chi>(zbar) zeta(zbar) + <chi>(zunder) zeta(zunder) ).
inline ReductionIntegrals reduction_drive(const DiscreteYoungMeasure& nu, const TestFunction& zeta,
                                          double eps, const GasLaw& law,
                                          const MollifierPair& mol = MollifierPair{}) {
    nu.validate();
    ReductionIntegrals out;
    if (nu.atoms.empty()) return out;

    std::vector<KernelExpansion> kes;
    std::vector<double> weights;
    std::vector<double> locs;
    for (const auto& a : nu.atoms) {
        kes.push_back(kernel_expansion(a.state, law));
        weights.push_back(a.weight);
        locs.push_back(kes.back().zunder);
        locs.push_back(kes.back().zbar);
    }

    auto avg_chi = [&](double t) {
        double s = 0.0;
        for (std::size_t k = 0; k < kes.size(); ++k)
            s += weights[k] * chi(t, nu.atoms[k].state, law);
        return s;
    };

    auto integrands = [&](double t, double& lhs, double& r1, double& r2) {
        double acc_lhs = 0.0, acc_r1 = 0.0, acc_r2 = 0.0;
        double avg_Dchi_phi = 0.0, avg_Dchi_phip = 0.0;
        std::vector<detail::AtomTraceSet> tp(kes.size()), tq(kes.size());
        for (std::size_t k = 0; k < kes.size(); ++k) {
            tp[k] = detail::atom_traces(kes[k], mol.phi, eps, t);
            tq[k] = detail::atom_traces(kes[k], mol.phi_prime, eps, t);
            avg_Dchi_phi += weights[k] * tp[k].Dchi;
            avg_Dchi_phip += weights[k] * tq[k].Dchi;
        }
        for (std::size_t k = 0; k < kes.size(); ++k) {
            const double u = nu.atoms[k].state.u;
            const double chik = chi(t, nu.atoms[k].state, law);
            const double sigk = sigma(t, nu.atoms[k].state, law);
            const double Ds_phi = detail::dsigma_trace(tp[k], t, u, law);
            const double Ds_phip = detail::dsigma_trace(tq[k], t, u, law);
            acc_lhs += weights[k] * (tp[k].Dchi * Ds_phip - Ds_phi * tq[k].Dchi);
            acc_r1 += weights[k] * (chik * Ds_phip - sigk * tq[k].Dchi);
            acc_r2 += weights[k] * (chik * Ds_phi - sigk * tp[k].Dchi);
        }
        const double z = zeta.f(t);
        lhs = acc_lhs * avg_chi(t) * z;
        r1 = acc_r1 * avg_Dchi_phi * z;
        r2 = acc_r2 * avg_Dchi_phip * z;
    };

    TestFunction g = zeta;
    for (double c : locs) g.features.push_back(c);
    const auto brk = detail::outer_breakpoints(g, locs, eps);

    const QuadratureRule& r = cached_legendre(16);
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const double mid = 0.5 * (brk[i] + brk[i + 1]);
        const double half = 0.5 * (brk[i + 1] - brk[i]);
        if (half <= 0.0) continue;
        for (std::size_t k = 0; k < r.nodes.size(); ++k) {
            const double t = mid + half * r.nodes[k];
            double lhs, r1, r2;
            integrands(t, lhs, r1, r2);
            out.lhs += r.weights[k] * half * lhs;
            out.rhs1 += r.weights[k] * half * r1;
            out.rhs2 += r.weights[k] * half * r2;
        }
    }
    return out;
}

}  // namespace eulergeom
