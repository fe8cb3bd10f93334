#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "eulergeom/common.hpp"
#include "eulergeom/gas_law.hpp"
#include "eulergeom/geometry.hpp"

namespace eulergeom {

struct Grid {
    double x_left;
    double x_right;
    int n_cells;

    Grid(double xl, double xr, int n) : x_left(xl), x_right(xr), n_cells(n) {
        if (n < 1 || xr <= xl) throw DomainError("Grid: empty or inverted");
    }

    double dx() const { return (x_right - x_left) / n_cells; }
    double center(int i) const { return x_left + (i + 0.5) * dx(); }
    double face(int i) const { return x_left + i * dx(); }
};

// Cell averages of the conserved fields m = rho A and p = rho u A.
struct GridSolution {
    double time = 0.0;
    Grid grid;
    std::vector<double> m;  // rho A >= 0
    std::vector<double> p;  // rho u A
    const Geometry* geom = nullptr;
    GasLaw law;
    double vacuum_floor = 0.0;

    GridSolution(const Grid& g, const Geometry* geo, const GasLaw& l)
        : grid(g), m(g.n_cells, 0.0), p(g.n_cells, 0.0), geom(geo), law(l) {}

    FluidState cell_state(int i, double area_i) const {
        if (m[i] <= vacuum_floor) return FluidState(0.0, 0.0);
        const double rho = m[i] / area_i;
        return FluidState(rho, p[i] / m[i]);
    }
};

struct InitialData {
    std::function<double(double)> rho;
    std::function<double(double)> u;
    double mass = 0.0;    // target total mass  M = ∫ rho A dx
    double energy = 0.0;  // target total energy E = ∫ (rho u^2/2 + U) A dx

    // Functionals evaluated from the raw profiles by composite fine quadrature.
    static InitialData from_profiles(std::function<double(double)> rho_fn,
                                     std::function<double(double)> u_fn, const Geometry& geom,
                                     const GasLaw& law, double lo, double hi,
                                     int samples = 200001) {
        InitialData d;
        d.rho = std::move(rho_fn);
        d.u = std::move(u_fn);
        const double h = (hi - lo) / (samples - 1);
        double M = 0.0, E = 0.0;
        const double x0 = geom.family() == GeometryFamily::Spherical && !geom.regularization_n()
                              ? std::max(lo, 1e-12)
                              : lo;
        for (int i = 0; i < samples; ++i) {
            const double x = std::max(x0, lo + i * h);
            const double r = std::max(0.0, d.rho(x));
            if (r == 0.0) continue;
            const double A = geom.area(x);
            const double uu = d.u(x);
            const double w = (i == 0 || i == samples - 1) ? 0.5 : 1.0;
            M += w * r * A * h;
            E += w * (0.5 * r * uu * uu + law.internal_energy(r)) * A * h;
        }
        d.mass = M;
        d.energy = E;
        return d;
    }
};

namespace detail {

// C^2 polynomial bump on [-1,1], unit mass: b(v) = (315/128994...) normalized (1-v^2)^4.
inline double mollifier_bump(double v) {
    if (std::fabs(v) >= 1.0) return 0.0;
    const double w = 1.0 - v * v;
    const double w2 = w * w;
    return (315.0 / 256.0) * w2 * w2;  // ∫_{-1}^{1} (1-v^2)^4 dv = 256/315
}

}  // namespace detail

// Bounded compactly-supported approximate initial data at index n:
// truncate to [-n, n], mollify at width 1/n, clamp fields at level n, then
// rescale the density so the discrete mass matches the target exactly.
inline GridSolution approximate_initial_data(const InitialData& data, const Geometry& geom,
                                             const GasLaw& law, int n, const Grid& grid) {
    if (n < 1) throw DomainError("approximate_initial_data: n >= 1 required");
    if (geom.family() == GeometryFamily::Spherical && !geom.regularization_n())
        throw DomainError("approximate_initial_data: spherical runs require a regularized geometry");
    if (geom.family() == GeometryFamily::Spherical && grid.x_left < 0.0)
        throw DomainError("approximate_initial_data: spherical grid must satisfy x_left >= 0");

    GridSolution sol(grid, &geom, law);
    const double eps = 1.0 / n;
    const double domain_left =
        geom.family() == GeometryFamily::Spherical ? 0.0 : -static_cast<double>(n);
    const double domain_right = static_cast<double>(n);

    auto truncated_rho = [&](double x) {
        if (x < domain_left || x > domain_right) return 0.0;
        if (x < -static_cast<double>(n) || x > static_cast<double>(n)) return 0.0;
        return std::max(0.0, data.rho(x));
    };
    auto truncated_momu = [&](double x) {
        if (x < domain_left || x > domain_right) return 0.0;
        return truncated_rho(x) > 0.0 ? data.u(x) : 0.0;
    };

    // mollified, clamped point values
    const int qn = 16;
    auto smooth_clamped = [&](double x, double& rho_out, double& u_out) {
        double r = 0.0, ru = 0.0;
        const double h = 2.0 * eps / qn;
        for (int k = 0; k < qn; ++k) {
            const double v = -eps + (k + 0.5) * h;
            const double wgt = detail::mollifier_bump(v / eps) / eps * h;
            const double rr = truncated_rho(x - v);
            r += wgt * rr;
            ru += wgt * rr * truncated_momu(x - v);
        }
        double u = r > 0.0 ? ru / r : 0.0;
        r = std::min(r, static_cast<double>(n));
        u = std::clamp(u, -static_cast<double>(n), static_cast<double>(n));
        rho_out = r;
        u_out = u;
    };

    const double dx = grid.dx();
    for (int i = 0; i < grid.n_cells; ++i) {
        const double x = grid.center(i);
        double r, u;
        smooth_clamped(x, r, u);
        const double A = geom.area(x);
        sol.m[i] = r * A;
        sol.p[i] = r * u * A;
    }

    double discrete_mass = 0.0;
    for (double mi : sol.m) discrete_mass += mi * dx;
    if (discrete_mass <= 0.0)
        throw EmptySupport("approximate_initial_data: truncation removed all mass");
    const double scale = data.mass / discrete_mass;
    for (int i = 0; i < grid.n_cells; ++i) {
        sol.m[i] *= scale;
        sol.p[i] *= scale;
    }

    double max_m = 0.0;
    for (double mi : sol.m) max_m = std::max(max_m, mi);
    sol.vacuum_floor = 1e-12 * max_m;
    for (int i = 0; i < grid.n_cells; ++i)
        if (sol.m[i] <= sol.vacuum_floor) sol.p[i] = 0.0;
    return sol;
}

namespace detail {

struct Flux {
    double mass;
    double momentum;
};

// HLL two-wave flux for the homogeneous part (rho, rho u) with Davis-type
// speed bounds u ± theta rho^theta. Unconditionally nonnegative intermediate
// density, so positivity holds under the CFL bound.
inline Flux hll_flux(const FluidState& l, const FluidState& r, const GasLaw& law) {
    const double cl = law.sound_speed(l.rho), cr = law.sound_speed(r.rho);
    const double sl = std::min(l.u - cl, r.u - cr);
    const double sr = std::max(l.u + cl, r.u + cr);
    const double fl_m = l.rho * l.u;
    const double fl_p = l.rho * l.u * l.u + law.pressure(l.rho);
    const double fr_m = r.rho * r.u;
    const double fr_p = r.rho * r.u * r.u + law.pressure(r.rho);
    if (sl >= 0.0) return {fl_m, fl_p};
    if (sr <= 0.0) return {fr_m, fr_p};
    const double inv = 1.0 / (sr - sl);
    return {(sr * fl_m - sl * fr_m + sl * sr * (r.rho - l.rho)) * inv,
            (sr * fl_p - sl * fr_p + sl * sr * (fr_m - fl_m)) * inv};
}

}  // namespace detail

struct StepInfo {
    double dt = 0.0;
    double max_speed = 0.0;
};

// One forward-Euler finite-volume update. Interface areas at cell faces,
// momentum flux in conservative form (rho u^2 + P) A with cell-centered source
// P_i (A_{i+1/2} - A_{i-1/2})/dx, which keeps constant rest states exact.
// Boundary conditions: zero-gradient at both window edges.
inline StepInfo step(GridSolution& sol, double cfl, double dt_cap = 0.0) {
    if (!(cfl > 0.0 && cfl < 1.0)) throw DomainError("step: cfl must lie in (0,1)");
    const Grid& g = sol.grid;
    const int n = g.n_cells;
    const double dx = g.dx();
    const Geometry& geom = *sol.geom;

    std::vector<FluidState> w(n);
    std::vector<double> area_c(n), area_f(n + 1);
    for (int i = 0; i < n; ++i) area_c[i] = geom.area(g.center(i));
    for (int i = 0; i <= n; ++i) area_f[i] = geom.area(g.face(i));
    double max_speed = 0.0;
    for (int i = 0; i < n; ++i) {
        w[i] = sol.cell_state(i, area_c[i]);
        max_speed = std::max(max_speed, std::fabs(w[i].u) + sol.law.sound_speed(w[i].rho));
    }

    StepInfo info;
    info.max_speed = max_speed;
    double dt = max_speed > 1e-300 ? cfl * dx / max_speed : cfl * dx;
    if (dt_cap > 0.0) dt = std::min(dt, dt_cap);
    info.dt = dt;

    std::vector<detail::Flux> fl(n + 1);
    parallel_for(static_cast<std::size_t>(n) + 1, [&](std::size_t k) {
        const int i = static_cast<int>(k);
        const FluidState& left = (i == 0) ? w[0] : w[i - 1];
        const FluidState& right = (i == n) ? w[n - 1] : w[i];
        fl[i] = detail::hll_flux(left, right, sol.law);
    });

    const double lam = dt / dx;
    for (int i = 0; i < n; ++i) {
        const double src = sol.law.pressure(w[i].rho) * (area_f[i + 1] - area_f[i]) / dx;
        sol.m[i] -= lam * (fl[i + 1].mass * area_f[i + 1] - fl[i].mass * area_f[i]);
        sol.p[i] -= lam * (fl[i + 1].momentum * area_f[i + 1] - fl[i].momentum * area_f[i]);
        sol.p[i] += dt * src;
        if (!std::isfinite(sol.m[i]) || !std::isfinite(sol.p[i]))
            throw BlowUp("step: non-finite state (CFL violation or corrupted data)");
        if (sol.m[i] <= sol.vacuum_floor) {
            sol.m[i] = std::max(sol.m[i], 0.0);
            sol.p[i] = 0.0;
        }
    }
    sol.time += dt;
    return info;
}

using SnapshotHook = std::function<void(const GridSolution&)>;

struct RunOptions {
    double t_end = 0.0;
    double cfl = 0.45;
    double snapshot_dt = 0.0;   // 0: every step
    double fixed_dt = 0.0;      // optional uniform step (capped by CFL)
    long max_steps = 50'000'000;
};

// March to t_end; returns the stored snapshots (always includes initial and
// final states). Hooks fire on every stored snapshot in order.
inline std::vector<GridSolution> run(GridSolution state, const RunOptions& opt,
                                     const std::vector<SnapshotHook>& hooks = {}) {
    if (opt.t_end < 0.0) throw DomainError("run: t_end must be >= 0");
    std::vector<GridSolution> snaps;
    auto emit = [&](const GridSolution& s) {
        snaps.push_back(s);
        for (const auto& h : hooks) h(s);
    };
    emit(state);
    if (opt.t_end == 0.0) return snaps;

    double next_snap = opt.snapshot_dt > 0.0 ? opt.snapshot_dt : 0.0;
    long steps = 0;
    while (state.time < opt.t_end - 1e-14) {
        if (++steps > opt.max_steps) throw BlowUp("run: step budget exhausted");
        double cap = opt.t_end - state.time;
        if (opt.fixed_dt > 0.0) cap = std::min(cap, opt.fixed_dt);
        step(state, opt.cfl, cap);
        if (opt.snapshot_dt <= 0.0 || state.time >= next_snap - 1e-14 ||
            state.time >= opt.t_end - 1e-14) {
            emit(state);
            if (opt.snapshot_dt > 0.0)
                while (next_snap <= state.time + 1e-14) next_snap += opt.snapshot_dt;
        }
    }
    return snaps;
}

}  // namespace eulergeom
