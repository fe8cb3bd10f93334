#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eulergeom/diagnostics.hpp"
#include "eulergeom/solver.hpp"
#include "test_helpers.hpp"

using namespace eulergeom;
using eulergeom::testing::linf_diff;
using eulergeom::testing::make_solution;

namespace {
const GasLaw law53(5.0 / 3.0);

InitialData sod_data(const Geometry& geom, const GasLaw& law, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return InitialData::from_profiles([mid](double x) { return x < mid ? 1.0 : 0.125; },
                                      [](double) { return 0.0; }, geom, law, lo, hi);
}
}  // namespace

TEST_CASE("well-balanced rest state in a varying nozzle") {
    const Geometry geom = Geometry::nozzle_cosine(2.0, 1.0, 1.0);
    const Grid grid(0.0, 2.0 * kPi, 128);
    GridSolution s = make_solution(geom, law53, grid, [](double) { return 1.0; },
                                   [](double) { return 0.0; });
    const GridSolution s0 = s;
    for (int k = 0; k < 300; ++k) step(s, 0.45);
    CHECK(linf_diff(s, s0) <= 1e-14);
}

TEST_CASE("vacuum stays vacuum") {
    const Geometry geom = Geometry::nozzle_constant(1.0);
    const Grid grid(-1.0, 1.0, 64);
    GridSolution s = make_solution(geom, law53, grid, [](double) { return 0.0; },
                                   [](double) { return 0.0; });
    for (int k = 0; k < 10; ++k) step(s, 0.5);
    for (int i = 0; i < grid.n_cells; ++i) {
        CHECK(s.m[i] == 0.0);
        CHECK(s.p[i] == 0.0);
    }
}

TEST_CASE("mass is conserved to rounding") {
    const Geometry geom = Geometry::nozzle_constant(1.0);
    const Grid grid(-0.5, 0.5, 200);
    const InitialData data = sod_data(geom, law53, -0.5, 0.5);
    GridSolution s = approximate_initial_data(data, geom, law53, 50, grid);
    const double m0 = mass(s);
    RunOptions opt;
    opt.t_end = 0.2;
    const auto traj = run(s, opt);
    for (const auto& snap : traj) CHECK(std::fabs(mass(snap) - m0) / m0 <= 1e-12);
}

TEST_CASE("positivity under randomized Riemann data") {
    UniformRng rng(4711);
    const Geometry geom = Geometry::nozzle_constant(1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const Grid grid(-1.0, 1.0, 100);
        const double rl = rng.uniform(0.0, 4.0) * (rng.uniform() < 0.2 ? 0.0 : 1.0);
        const double rr = rng.uniform(0.0, 4.0) * (rng.uniform() < 0.2 ? 0.0 : 1.0);
        const double ul = rng.uniform(-2.0, 2.0), ur = rng.uniform(-2.0, 2.0);
        GridSolution s = make_solution(
            geom, law53, grid, [&](double x) { return x < 0 ? rl : rr; },
            [&](double x) { return x < 0 ? ul : ur; });
        for (int k = 0; k < 50; ++k) step(s, 0.45);
        for (int i = 0; i < grid.n_cells; ++i) CHECK(s.m[i] >= 0.0);
    }
}

TEST_CASE("sod self-convergence under refinement") {
    const Geometry geom = Geometry::nozzle_constant(1.0);

    auto run_sod = [&](int n) {
        const Grid grid(-0.5, 0.5, n);
        const InitialData data = sod_data(geom, law53, -0.5, 0.5);
        GridSolution s = approximate_initial_data(data, geom, law53, 50, grid);
        RunOptions opt;
        opt.t_end = 0.2;
        return run(s, opt).back();
    };

    auto restrict_l1 = [](const GridSolution& fine, const GridSolution& coarse) {
        const int ratio = fine.grid.n_cells / coarse.grid.n_cells;
        double err = 0.0;
        for (int i = 0; i < coarse.grid.n_cells; ++i) {
            double avg = 0.0;
            for (int j = 0; j < ratio; ++j) avg += fine.m[i * ratio + j];
            avg /= ratio;
            err += std::fabs(avg - coarse.m[i]) * coarse.grid.dx();
        }
        return err;
    };

    const GridSolution s100 = run_sod(100);
    const GridSolution s400 = run_sod(400);
    const GridSolution s1600 = run_sod(1600);
    const double coarse_gap = restrict_l1(s400, s100);
    const double fine_gap = restrict_l1(s1600, s400);
    CHECK(fine_gap < coarse_gap);
}

TEST_CASE("compact support propagates inside the invariant cone") {
    const Geometry geom = Geometry::nozzle_constant(1.0);
    const Grid grid(-4.0, 4.0, 400);
    GridSolution s = make_solution(
        geom, law53, grid, [](double x) { return std::fabs(x) < 1.0 ? 1.0 + 0.5 * std::cos(kPi * x) : 0.0; },
        [](double) { return 0.0; });

    auto hull = [&](const GridSolution& sol) {
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < sol.grid.n_cells; ++i)
            if (sol.m[i] > sol.vacuum_floor) {
                lo = std::min(lo, sol.grid.center(i));
                hi = std::max(hi, sol.grid.center(i));
            }
        return std::pair<double, double>(lo, hi);
    };
    const auto h0 = hull(s);

    double speed = 0.0;
    for (int i = 0; i < grid.n_cells; ++i) {
        const FluidState w = s.cell_state(i, 1.0);
        speed = std::max(speed, std::fabs(w.u) + std::pow(w.rho, law53.theta));
    }

    RunOptions opt;
    opt.t_end = 0.5;
    opt.cfl = 0.5;  // one cell per step stays within the invariant-speed cone
    const auto traj = run(s, opt);
    for (const auto& snap : traj) {
        const auto h = hull(snap);
        CHECK(h.first >= h0.first - speed * snap.time - 2.0 * grid.dx());
        CHECK(h.second <= h0.second + speed * snap.time + 2.0 * grid.dx());
    }
}

TEST_CASE("galilean boost of constant states is exact") {
    const Geometry geom = Geometry::nozzle_constant(1.0);
    const Grid grid(-1.0, 1.0, 100);
    const double U0 = 0.6;
    GridSolution a = make_solution(geom, law53, grid, [](double) { return 1.4; },
                                   [](double) { return 0.2; });
    GridSolution b = make_solution(geom, law53, grid, [](double) { return 1.4; },
                                   [U0](double) { return 0.2 + U0; });
    for (int k = 0; k < 100; ++k) {
        step(a, 0.4);
        step(b, 0.4);
    }
    for (int i = 0; i < grid.n_cells; ++i) {
        CHECK(std::fabs(b.m[i] - a.m[i]) <= 1e-13);
        CHECK(std::fabs(b.p[i] - (a.p[i] + U0 * a.m[i])) <= 1e-13);
    }
}

TEST_CASE("galilean consistency of profiles improves under refinement") {
    const Geometry geom = Geometry::nozzle_constant(1.0);
    auto mismatch = [&](int n) {
        const Grid grid(-2.0, 2.0, n);
        const double U0 = 0.5, T = 0.4;
        auto rho = [](double x) { return std::fabs(x) < 1.0 ? 1.0 + 0.25 * std::cos(kPi * x) : 0.5; };
        GridSolution a = make_solution(geom, law53, grid, rho, [](double) { return 0.0; });
        GridSolution b = make_solution(geom, law53, grid, rho, [U0](double) { return U0; });
        RunOptions opt;
        opt.t_end = T;
        opt.cfl = 0.4;
        opt.fixed_dt = 0.4 * grid.dx() / 2.5;  // common step for both runs
        const GridSolution fa = run(a, opt).back();
        const GridSolution fb = run(b, opt).back();
        // compare boosted run against the translated-and-boosted base run
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = grid.center(i) - U0 * T;
            if (x < grid.x_left || x > grid.x_right) continue;
            const int j = static_cast<int>((x - grid.x_left) / grid.dx());
            if (j < 0 || j >= n) continue;
            err += std::fabs(fb.m[i] - fa.m[j]) * grid.dx();
        }
        return err;
    };
    const double e200 = mismatch(200);
    const double e800 = mismatch(800);
    CHECK(e800 < e200);
}

TEST_CASE("approximate initial data: compact bounded input is reproduced") {
    const Geometry geom = Geometry::nozzle_constant(1.0);
    const Grid grid(-2.0, 2.0, 400);
    const InitialData data = InitialData::from_profiles(
        [](double x) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; }, [](double) { return 0.0; },
        geom, law53, -2.0, 2.0);
    CHECK(data.mass == Catch::Approx(1.0).epsilon(1e-6));
    const GridSolution s = approximate_initial_data(data, geom, law53, 40, grid);
    CHECK(mass(s) == Catch::Approx(data.mass).epsilon(1e-12));
}

TEST_CASE("approximate initial data: unbounded density is clamped, mass exact, energy controlled") {
    const Geometry geom = Geometry::nozzle_constant(1.0);
    const Grid grid(-0.5, 1.5, 800);
    const InitialData data = InitialData::from_profiles(
        [](double x) { return (x > 0.0 && x < 1.0) ? 1.0 / std::sqrt(x) : 0.0; },
        [](double) { return 0.0; }, geom, law53, -0.5, 1.5);
    CHECK(data.mass == Catch::Approx(2.0).epsilon(5e-3));   // trapezoid error at the x^{-1/2} edge
    CHECK(data.energy == Catch::Approx(0.6).epsilon(3e-2));

    const int n = 10;
    const GridSolution s = approximate_initial_data(data, geom, law53, n, grid);
    CHECK(mass(s) == Catch::Approx(data.mass).epsilon(1e-12));
    for (int i = 0; i < grid.n_cells; ++i) CHECK(s.m[i] <= double(n) * 1.05 + 1e-12);
    CHECK(energy(s) <= 2.0 * data.energy);

    const InitialData empty = InitialData::from_profiles(
        [](double) { return 0.0; }, [](double) { return 0.0; }, geom, law53, -0.5, 1.5);
    CHECK_THROWS_AS(approximate_initial_data(empty, geom, law53, 10, grid), EmptySupport);
}

TEST_CASE("run with t_end zero returns the initial snapshot only") {
    const Geometry geom = Geometry::nozzle_constant(1.0);
    const Grid grid(-1.0, 1.0, 32);
    GridSolution s = make_solution(geom, law53, grid, [](double) { return 1.0; },
                                   [](double) { return 0.0; });
    RunOptions opt;
    opt.t_end = 0.0;
    const auto traj = run(s, opt);
    REQUIRE(traj.size() == 1);
    CHECK(traj.front().time == 0.0);
}

TEST_CASE("corrupted states raise BlowUp") {
    const Geometry geom = Geometry::nozzle_constant(1.0);
    const Grid grid(-1.0, 1.0, 16);
    GridSolution s = make_solution(geom, law53, grid, [](double) { return 1.0; },
                                   [](double) { return 0.0; });
    s.p[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(step(s, 0.4), BlowUp);
    CHECK_THROWS_AS(step(s, 1.5), DomainError);
}

TEST_CASE("spherical runs require the regularized geometry") {
    const Geometry bare = Geometry::spherical(2.0);
    const Grid grid(0.0, 1.0, 32);
    const InitialData data = InitialData::from_profiles(
        [](double x) { return x > 0.2 && x < 0.8 ? 1.0 : 0.0; }, [](double) { return 0.0; },
        Geometry::spherical(2.0, 10), law53, 0.0, 1.0);
    CHECK_THROWS_AS(approximate_initial_data(data, bare, law53, 10, grid), DomainError);
    CHECK_NOTHROW(approximate_initial_data(data, Geometry::spherical(2.0, 10), law53, 10, grid));
}
