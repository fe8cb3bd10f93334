#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "eulergeom/common.hpp"
#include "eulergeom/kernels.hpp"
#include "eulergeom/solver.hpp"

namespace eulergeom {

namespace detail {

inline std::vector<double> cell_areas(const GridSolution& s) {
    std::vector<double> a(s.grid.n_cells);
    for (int i = 0; i < s.grid.n_cells; ++i) a[i] = s.geom->area(s.grid.center(i));
    return a;
}

}  // namespace detail

// M = ∫ rho A dx = Σ m_i dx
inline double mass(const GridSolution& s) {
    double sum = 0.0;
    for (double mi : s.m) sum += mi;
    return sum * s.grid.dx();
}

// E = ∫ (rho u^2/2 + U(rho)) A dx
inline double energy(const GridSolution& s) {
    const auto area = detail::cell_areas(s);
    double sum = 0.0;
    for (int i = 0; i < s.grid.n_cells; ++i) {
        const FluidState w = s.cell_state(i, area[i]);
        if (w.vacuum()) continue;
        sum += (0.5 * w.rho * w.u * w.u + s.law.internal_energy(w.rho)) * area[i];
    }
    return sum * s.grid.dx();
}

// Total eta_psi weighted by A.
inline double entropy_total(const GridSolution& s, const EntropyWeight& psi) {
    const auto area = detail::cell_areas(s);
    double sum = 0.0;
    for (int i = 0; i < s.grid.n_cells; ++i) {
        const FluidState w = s.cell_state(i, area[i]);
        if (w.vacuum()) continue;
        sum += entropy_pair(psi, w, s.law).eta * area[i];
    }
    return sum * s.grid.dx();
}

struct EntropyResidual {
    std::vector<double> cell_residual;  // discrete divergence, one entry per cell
    double production = 0.0;            // Σ max(-residual, 0) dx dt  (mu-budget estimate)
};

// Discrete entropy-inequality residual between two consecutive snapshots:
//   [eta A]_t + [q A]_x + (rho u eta_rho - q) A_x  <= 0.
// Face fluxes are arithmetic means of cell values against face areas, so the
// residual vanishes identically on rest states for every weight.
inline EntropyResidual entropy_residuals(const GridSolution& before, const GridSolution& after,
                                         const EntropyWeight& psi) {
    if (!psi.convex())
        throw NonConvexWeight("entropy_residuals: weight must be convex (use flux_bound for s|s|)");
    const Grid& g = before.grid;
    const int n = g.n_cells;
    const double dx = g.dx();
    const double dt = after.time - before.time;
    if (dt <= 0.0) throw DomainError("entropy_residuals: snapshots must be time-ordered");
    const Geometry& geom = *before.geom;

    std::vector<double> area_c(n), area_f(n + 1);
    for (int i = 0; i < n; ++i) area_c[i] = geom.area(g.center(i));
    for (int i = 0; i <= n; ++i) area_f[i] = geom.area(g.face(i));

    std::vector<double> eta0(n), eta1(n), q0(n), coef(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
        const int i = static_cast<int>(k);
        const FluidState w0 = before.cell_state(i, area_c[i]);
        const FluidState w1 = after.cell_state(i, area_c[i]);
        const EntropyPair p0 = entropy_pair(psi, w0, before.law);
        eta0[i] = p0.eta;
        q0[i] = p0.q;
        eta1[i] = entropy_pair(psi, w1, after.law).eta;
        coef[i] = rho_u_eta_rho(psi, w0, before.law) - p0.q;
    });

    EntropyResidual out;
    out.cell_residual.resize(n);
    double prod = 0.0;
    for (int i = 0; i < n; ++i) {
        const double qm = (i == 0) ? q0[0] : 0.5 * (q0[i - 1] + q0[i]);
        const double qp = (i == n - 1) ? q0[n - 1] : 0.5 * (q0[i] + q0[i + 1]);
        const double div_x = (qp * area_f[i + 1] - qm * area_f[i]) / dx;
        const double dA = (area_f[i + 1] - area_f[i]) / dx;
        const double r = (eta1[i] - eta0[i]) * area_c[i] / dt + div_x + coef[i] * dA;
        out.cell_residual[i] = r;
        prod += std::max(-r, 0.0);
    }
    out.production = prod * dx * dt;
    return out;
}

// ∬ rho^{gamma+1} A^2 dx dt by trapezoid in time over the snapshots, with the
// a-priori bound 2 M sqrt(2 M E) + T M E |(A_x)_-|_inf reported alongside.
struct HigherIntegrability {
    double functional = 0.0;
    double bound = 0.0;
};

inline HigherIntegrability higher_integrability(const std::vector<GridSolution>& traj, double T,
                                                double mass_bar, double energy_bar) {
    if (traj.size() < 2) throw DomainError("higher_integrability: need >= 2 snapshots");
    const Grid& g = traj.front().grid;
    const int n = g.n_cells;
    const double dx = g.dx();
    const auto area = detail::cell_areas(traj.front());
    const double gamma = traj.front().law.gamma;

    auto space_integral = [&](const GridSolution& s) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const FluidState w = s.cell_state(i, area[i]);
            if (w.vacuum()) continue;
            sum += std::pow(w.rho, gamma + 1.0) * area[i] * area[i];
        }
        return sum * dx;
    };

    HigherIntegrability out;
    double prev_t = traj.front().time;
    double prev_v = space_integral(traj.front());
    for (std::size_t k = 1; k < traj.size() && prev_t < T - 1e-14; ++k) {
        const double t = std::min(traj[k].time, T);
        const double v = space_integral(traj[k]);
        out.functional += 0.5 * (prev_v + v) * (t - prev_t);
        prev_t = t;
        prev_v = v;
    }
    const auto norms = traj.front().geom->grad_negative_part_norms(g.x_left, g.x_right);
    out.bound = 2.0 * mass_bar * std::sqrt(2.0 * mass_bar * energy_bar) +
                T * mass_bar * energy_bar * norms.second;
    return out;
}

// h-potential: cumulative mass from the left boundary (the origin side for
// spherical runs). By construction dh/dx = rho A exactly and 0 <= h <= M.
inline std::vector<double> h_potential(const GridSolution& s) {
    std::vector<double> h(s.grid.n_cells);
    double acc = 0.0;
    const double dx = s.grid.dx();
    for (int i = 0; i < s.grid.n_cells; ++i) {
        acc += s.m[i] * dx;
        h[i] = acc;
    }
    return h;
}

// max_i |Δ_t h_i + (rho u A)_i| between two snapshots (O(dx+dt) consistency).
inline double h_time_consistency(const GridSolution& before, const GridSolution& after) {
    const double dt = after.time - before.time;
    if (dt <= 0.0) throw DomainError("h_time_consistency: snapshots must be time-ordered");
    const auto h0 = h_potential(before);
    const auto h1 = h_potential(after);
    double worst = 0.0;
    for (int i = 0; i < before.grid.n_cells; ++i) {
        const double dh = (h1[i] - h0[i]) / dt;
        worst = std::max(worst, std::fabs(dh + 0.5 * (before.p[i] + after.p[i])));
    }
    return worst;
}

struct HoelderQuotients {
    double space = 0.0;  // sup |h(t,x2)-h(t,x1)| / |x2-x1|^{(gamma-1)/gamma}
    double time = 0.0;   // sup |h(t2,x)-h(t1,x)| / |t2-t1|^{2(gamma-1)/(3 gamma-1)}
};

// Empirical Hoelder quotients of the h-potential over randomly sampled pairs
// (O(N log N) pairs rather than all pairs).
inline HoelderQuotients hoelder_quotients(const std::vector<GridSolution>& traj,
                                          std::uint64_t seed = 12345) {
    if (traj.size() < 2) throw DomainError("hoelder_quotients: need >= 2 snapshots");
    const double gamma = traj.front().law.gamma;
    const double ex_space = (gamma - 1.0) / gamma;
    const double ex_time = 2.0 * (gamma - 1.0) / (3.0 * gamma - 1.0);
    const Grid& g = traj.front().grid;
    const int n = g.n_cells;

    std::vector<std::vector<double>> h(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) h[k] = h_potential(traj[k]);

    UniformRng rng(seed);
    HoelderQuotients out;
    const std::size_t pairs =
        static_cast<std::size_t>(n) * static_cast<std::size_t>(std::ceil(std::log2(n + 1.0)));
    for (std::size_t it = 0; it < pairs; ++it) {
        const std::size_t k = rng.next_u64() % traj.size();
        int i = static_cast<int>(rng.next_u64() % n);
        int j = static_cast<int>(rng.next_u64() % n);
        if (i == j) continue;
        const double dh = std::fabs(h[k][i] - h[k][j]);
        const double dxp = std::pow(std::fabs(g.center(i) - g.center(j)), ex_space);
        if (dxp > 0.0) out.space = std::max(out.space, dh / dxp);
    }
    for (std::size_t it = 0; it < pairs; ++it) {
        std::size_t k1 = rng.next_u64() % traj.size();
        std::size_t k2 = rng.next_u64() % traj.size();
        if (k1 == k2) continue;
        const int i = static_cast<int>(rng.next_u64() % n);
        const double dtq = std::pow(std::fabs(traj[k1].time - traj[k2].time), ex_time);
        if (dtq > 0.0)
            out.time = std::max(out.time, std::fabs(h[k1][i] - h[k2][i]) / dtq);
    }
    return out;
}

struct FluxBoundProfile {
    std::vector<double> y;         // cell centers
    std::vector<double> Q;         // A(y) ∫_0^T (rho |u|^3 + rho^{gamma+theta}) dt
    std::vector<double> envelope;  // exp(∫_y^inf (A_x)_- / A dx), the Gronwall shape
    double sup_Q = 0.0;
};

inline FluxBoundProfile flux_bound_profile(const std::vector<GridSolution>& traj, double T) {
    if (traj.size() < 2) throw DomainError("flux_bound_profile: need >= 2 snapshots");
    const Grid& g = traj.front().grid;
    const int n = g.n_cells;
    const auto area = detail::cell_areas(traj.front());
    const GasLaw& law = traj.front().law;
    const double ex = law.gamma + law.theta;

    FluxBoundProfile out;
    out.y.resize(n);
    out.Q.assign(n, 0.0);
    for (int i = 0; i < n; ++i) out.y[i] = g.center(i);

    auto integrand = [&](const GridSolution& s, int i) {
        const FluidState w = s.cell_state(i, area[i]);
        if (w.vacuum()) return 0.0;
        return w.rho * std::fabs(w.u) * w.u * w.u + std::pow(w.rho, ex);
    };

    double prev_t = traj.front().time;
    std::vector<double> prev(n);
    for (int i = 0; i < n; ++i) prev[i] = integrand(traj.front(), i);
    for (std::size_t k = 1; k < traj.size() && prev_t < T - 1e-14; ++k) {
        const double t = std::min(traj[k].time, T);
        for (int i = 0; i < n; ++i) {
            const double v = integrand(traj[k], i);
            out.Q[i] += 0.5 * (prev[i] + v) * (t - prev_t);
            prev[i] = v;
        }
        prev_t = t;
    }
    for (int i = 0; i < n; ++i) {
        out.Q[i] *= area[i];
        out.sup_Q = std::max(out.sup_Q, out.Q[i]);
    }

    // Gronwall envelope shape (unknown paper constants set to 1)
    out.envelope.assign(n, 1.0);
    double acc = 0.0;
    const double dx = g.dx();
    for (int i = n - 1; i >= 0; --i) {
        const double gneg = -std::min(traj.front().geom->area_deriv(g.center(i)), 0.0);
        acc += gneg / area[i] * dx;
        out.envelope[i] = std::exp(acc);
    }
    return out;
}

// Smooth C^2 cutoff: Phi_R(s) = 1 - phi(s/R), phi = 1 on |v|<=1, 0 on |v|>=2,
// quintic smoothstep in between.
inline double cutoff_Phi(double s, double R) {
    const double v = std::fabs(s) / R;
    if (v <= 1.0) return 0.0;
    if (v >= 2.0) return 1.0;
    const double t = v - 1.0;
    return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

struct TailEnergySeries {
    std::vector<double> time;
    std::vector<double> smooth_tail;  // ∬ s^2 Phi_R chi ds dx
    std::vector<double> psi_tail;     // eta_{psi_R} total (the monitored convex entropy)
};

// Appendix tail-energy monitor; constant-A nozzle only.
inline TailEnergySeries tail_energy(const std::vector<GridSolution>& traj, double R) {
    const Geometry& geom = *traj.front().geom;
    if (geom.family() != GeometryFamily::Nozzle ||
        geom.area_upper_bound() != geom.area_lower_bound())
        throw NotApplicable("tail_energy: requires a constant-area nozzle");
    if (R <= 0.0) throw DomainError("tail_energy: R must be positive");

    const double A = geom.area_lower_bound();
    const Grid& g = traj.front().grid;
    const int n = g.n_cells;
    const double dx = g.dx();
    const EntropyWeight psiR = EntropyWeight::truncated_quadratic(R);

    TailEnergySeries out;
    for (const GridSolution& s : traj) {
        double smooth_sum = 0.0, psi_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const FluidState w = s.cell_state(i, A);
            if (w.vacuum()) continue;
            const auto sup = kernel_support(w, s.law);
            if (std::max(std::fabs(sup[0]), std::fabs(sup[1])) <= R) continue;
            psi_sum += entropy_pair(psiR, w, s.law).eta;
            smooth_sum += chi_weighted_integral(
                [&](double sv) { return sv * sv * cutoff_Phi(sv, R); }, w, s.law,
                {-2.0 * R, -R, R, 2.0 * R}, 1e-12);
        }
        out.time.push_back(s.time);
        out.smooth_tail.push_back(smooth_sum * A * dx);
        out.psi_tail.push_back(psi_sum * A * dx);
    }
    return out;
}

struct EnergyFluxMoments {
    double cubic_moment = 0.0;  // ∬ (∫ |s|^3 chi ds) A dx dt
    double pgamma_u = 0.0;      // ∬ rho^gamma |u| A dx dt
};

inline EnergyFluxMoments energy_flux_moments(const std::vector<GridSolution>& traj, double T) {
    if (traj.size() < 2) throw DomainError("energy_flux_moments: need >= 2 snapshots");
    const Grid& g = traj.front().grid;
    const int n = g.n_cells;
    const double dx = g.dx();
    const auto area = detail::cell_areas(traj.front());
    const GasLaw& law = traj.front().law;

    auto abs_cubic = [&](const FluidState& w) {
        if (w.vacuum()) return 0.0;
        const auto sup = kernel_support(w, law);
        if (sup[0] >= 0.0 || sup[1] <= 0.0) {
            // support on one side of the origin: |s|^3 = ±s^3, use closed moments
            const auto m = detail::chi_power_moments(w, law);
            return std::fabs(m[3]);
        }
        return chi_weighted_integral([&](double s) { return std::fabs(s * s * s); }, w, law, {0.0},
                                     1e-12);
    };

    auto space = [&](const GridSolution& s, double& cubic, double& pgu) {
        cubic = 0.0;
        pgu = 0.0;
        for (int i = 0; i < n; ++i) {
            const FluidState w = s.cell_state(i, area[i]);
            if (w.vacuum()) continue;
            cubic += abs_cubic(w) * area[i];
            pgu += std::pow(w.rho, law.gamma) * std::fabs(w.u) * area[i];
        }
        cubic *= dx;
        pgu *= dx;
    };

    EnergyFluxMoments out;
    double prev_t = traj.front().time, pc, pp;
    space(traj.front(), pc, pp);
    for (std::size_t k = 1; k < traj.size() && prev_t < T - 1e-14; ++k) {
        const double t = std::min(traj[k].time, T);
        double c, p;
        space(traj[k], c, p);
        out.cubic_moment += 0.5 * (pc + c) * (t - prev_t);
        out.pgamma_u += 0.5 * (pp + p) * (t - prev_t);
        pc = c;
        pp = p;
        prev_t = t;
    }
    return out;
}

}  // namespace eulergeom
