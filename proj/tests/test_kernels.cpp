#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eulergeom/kernels.hpp"

using namespace eulergeom;

namespace {
const GasLaw law53(5.0 / 3.0);
const GasLaw law43(4.0 / 3.0);
const GasLaw law2(2.0);
}  // namespace

TEST_CASE("gas law derived constants") {
    CHECK(law53.theta == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(law53.lambda == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(law53.kappa == Catch::Approx(1.0 / 15.0).epsilon(1e-14));
    CHECK(law53.c_norm == Catch::Approx(0.75).epsilon(1e-13));
    CHECK(law2.kappa == Catch::Approx(1.0 / 8.0).epsilon(1e-14));
    CHECK_THROWS_AS(GasLaw(1.0), DomainError);
    CHECK_THROWS_AS(GasLaw(3.0), DomainError);

    // lambda >= 1 on the reduction range gamma in (1, 5/3]
    for (double g : {1.1, 1.3, 5.0 / 3.0}) CHECK(GasLaw(g).lambda >= 1.0 - 1e-12);
}

TEST_CASE("chi point values and support") {
    CHECK(chi(0.0, FluidState(1.0, 0.0), law53) == Catch::Approx(0.75).epsilon(1e-14));
    CHECK(chi(2.0, FluidState(1.0, 0.0), law53) == 0.0);
    CHECK(chi(0.3, FluidState(0.0, 7.0), law53) == 0.0);  // vacuum

    // support is exactly [u - rho^theta, u + rho^theta]
    const FluidState w(2.3, 0.7);
    const auto sup = kernel_support(w, law43);
    CHECK(chi(sup[0] - 1e-12, w, law43) == 0.0);
    CHECK(chi(sup[1] + 1e-12, w, law43) == 0.0);
    CHECK(chi(0.5 * (sup[0] + sup[1]), w, law43) > 0.0);
}

TEST_CASE("sigma point values") {
    CHECK(sigma(0.5, FluidState(1.0, 0.0), law53) == Catch::Approx(0.09375).epsilon(1e-14));
    // at s = u the multiplier collapses to u
    const FluidState w(1.7, -0.4);
    CHECK(sigma(w.u, w, law2) == Catch::Approx(w.u * chi(w.u, w, law2)).epsilon(1e-14));
    CHECK(sigma(1.0, FluidState(0.0, 3.0), law53) == 0.0);
}

TEST_CASE("galilean shift of the kernel") {
    UniformRng rng(21);
    for (int t = 0; t < 200; ++t) {
        const double rho = rng.uniform(0.0, 5.0);
        const double u = rng.uniform(-5.0, 5.0);
        const double s = rng.uniform(-8.0, 8.0);
        const GasLaw law(rng.uniform(1.05, 2.95));
        CHECK(chi(s, FluidState(rho, u), law) ==
              Catch::Approx(chi(s - u, FluidState(rho, 0.0), law)).margin(1e-15));
    }
}

TEST_CASE("kernel scaling form") {
    // chi(s|rho,u) = c_norm rho^{2 theta lambda} (1 - t^2)^lambda, t = (s-u)/rho^theta
    UniformRng rng(22);
    for (int t = 0; t < 100; ++t) {
        const GasLaw law(rng.uniform(1.05, 2.95));
        const double rho = rng.uniform(1e-3, 6.0);
        const double u = rng.uniform(-3.0, 3.0);
        const double s = rng.uniform(u - 2.0, u + 2.0);
        const double ct = std::pow(rho, law.theta);
        const double tt = (s - u) / ct;
        const double f = std::fabs(tt) < 1.0 ? std::pow(1.0 - tt * tt, law.lambda) : 0.0;
        const double expect = law.c_norm * std::pow(rho, 2.0 * law.theta * law.lambda) * f;
        CHECK(chi(s, FluidState(rho, u), law) == Catch::Approx(expect).margin(1e-12));
    }
}

TEST_CASE("moment matrix closed forms") {
    const MomentMatrix a = moment_matrix(FluidState(1.0, 0.0), law53);
    CHECK(a.m[0][0] == Catch::Approx(1.0));
    CHECK(a.m[0][1] == 0.0);
    CHECK(a.m[1][0] == 0.0);
    CHECK(a.m[1][1] == Catch::Approx(1.0 / 15.0).epsilon(1e-14));
    CHECK(a.m[2][0] == Catch::Approx(0.1).epsilon(1e-14));
    CHECK(a.m[2][1] == 0.0);

    const MomentMatrix z = moment_matrix(FluidState(0.0, 0.0), law53);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 2; ++c) CHECK(z.m[r][c] == 0.0);

    // gamma = 2, rho = u = 1: P = 1/8, U = 1/8, Q = U + P = 1/4
    const MomentMatrix b = moment_matrix(FluidState(1.0, 1.0), law2);
    CHECK(b.m[0][0] == Catch::Approx(1.0));
    CHECK(b.m[0][1] == Catch::Approx(1.0));
    CHECK(b.m[1][1] == Catch::Approx(1.0 + 1.0 / 8.0));
    CHECK(b.m[2][0] == Catch::Approx(0.5 + 1.0 / 8.0));
    CHECK(b.m[2][1] == Catch::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("moment identity: quadrature matches analytic moments") {
    // property over the kernel module's stated sampling box
    const double gammas[3] = {4.0 / 3.0, 1.5, 5.0 / 3.0};
    UniformRng rng(23);
    for (int t = 0; t < 120; ++t) {
        const GasLaw law(gammas[t % 3]);
        const FluidState w(rng.uniform(0.0, 10.0), rng.uniform(-10.0, 10.0));
        const MomentMatrix target = moment_matrix(w, law);
        const EntropyWeight psis[3] = {EntropyWeight::constant(1.0),
                                       EntropyWeight::linear(0.0, 1.0),
                                       EntropyWeight::quadratic(0.0, 0.0, 0.5)};
        for (int r = 0; r < 3; ++r) {
            EntropyPair viaq;
            if (!w.vacuum()) {
                const double tol = 1e-12 * std::max(1.0, w.rho * (1 + w.u * w.u));
                viaq.eta = chi_weighted_integral([&](double s) { return psis[r](s); }, w, law, {},
                                                 tol);
                viaq.q = chi_weighted_integral(
                    [&](double s) { return psis[r](s) * (law.theta * s + (1 - law.theta) * w.u); },
                    w, law, {}, tol * (1 + std::fabs(w.u)));
            }
            const double scale0 = std::max(std::fabs(target.m[r][0]), 1e-10);
            const double scale1 = std::max(std::fabs(target.m[r][1]), 1e-10);
            CHECK(std::fabs(viaq.eta - target.m[r][0]) / scale0 < 1e-8);
            CHECK(std::fabs(viaq.q - target.m[r][1]) / scale1 < 1e-8);
        }
    }
}

TEST_CASE("entropy pair examples") {
    const EntropyPair e1 = entropy_pair(EntropyWeight::energy(), FluidState(1.0, 0.0), law53);
    CHECK(e1.eta == Catch::Approx(0.1).epsilon(1e-12));

    const EntropyPair e2 = entropy_pair(EntropyWeight::constant(1.0), FluidState(2.0, 3.0), law43);
    CHECK(e2.eta == Catch::Approx(2.0).epsilon(1e-12));

    const EntropyPair e3 = entropy_pair(EntropyWeight::energy(), FluidState(0.0, 0.0), law53);
    CHECK(e3.eta == 0.0);
    CHECK(e3.q == 0.0);
}

TEST_CASE("entropy pair via Gauss-Jacobi agrees with closed moments") {
    UniformRng rng(24);
    for (int t = 0; t < 60; ++t) {
        const GasLaw law(rng.uniform(1.05, 2.95));
        const FluidState w(rng.uniform(1e-3, 8.0), rng.uniform(-6.0, 6.0));
        // a smooth compactly supported table weight forces the quadrature path
        std::vector<double> xs, vs;
        for (int k = 0; k <= 40; ++k) {
            const double s = -12.0 + 24.0 * k / 40.0;
            xs.push_back(s);
            vs.push_back(std::exp(-0.1 * s * s));
        }
        const EntropyWeight tab = EntropyWeight::table(xs, vs);
        const EntropyPair viaj = entropy_pair(tab, w, law);
        // reference through the substituted adaptive route with extra splits
        std::vector<double> splits;
        for (double q = -12.0; q <= 12.0; q += 1.5) splits.push_back(q);
        const double ref =
            chi_weighted_integral([&](double s) { return tab(s); }, w, law, splits, 1e-13);
        CHECK(viaj.eta == Catch::Approx(ref).margin(1e-8 * std::max(1.0, std::fabs(ref))));
    }
}

TEST_CASE("growth bounds for compactly supported weights") {
    // |eta_psi| <= C min(rho, rho^{2 lambda theta}) with
    // C = max(|psi|_inf, c_norm |psi|_1), and the flux bound
    // |q_psi| <= (max(|cbar|,|cunder|) + (zbar - zunder)) |eta_psi|.
    UniformRng rng(25);
    const double cu = -1.5, cb = 2.0;  // support of psi
    std::vector<double> xs, vs;
    for (int k = 0; k <= 56; ++k) {
        const double s = cu + (cb - cu) * k / 56.0;
        xs.push_back(s);
        const double mid = (s - cu) * (cb - s);
        vs.push_back(mid * mid);
    }
    const EntropyWeight psi = EntropyWeight::table(xs, vs);
    double psi_inf = 0.0, psi_l1 = 0.0;
    for (int k = 0; k < 4000; ++k) {
        const double s = cu + (cb - cu) * (k + 0.5) / 4000;
        psi_inf = std::max(psi_inf, std::fabs(psi(s)));
        psi_l1 += std::fabs(psi(s)) * (cb - cu) / 4000;
    }

    for (int t = 0; t < 150; ++t) {
        const GasLaw law(rng.uniform(1.05, 2.95));
        const FluidState w(rng.uniform(0.0, 10.0), rng.uniform(-10.0, 10.0));
        const EntropyPair p = entropy_pair(psi, w, law);
        const double C = std::max(psi_inf, law.c_norm * psi_l1) * (1.0 + 1e-10);
        const double cap =
            C * std::min(w.rho, std::pow(w.rho, 2.0 * law.lambda * law.theta));
        CHECK(std::fabs(p.eta) <= cap + 1e-12);
        const RiemannPair z = to_riemann(w, law);
        const double qcap = (std::max(std::fabs(cb), std::fabs(cu)) + (z.zbar - z.zunder)) *
                            std::fabs(p.eta);
        CHECK(std::fabs(p.q) <= qcap + 1e-12);
        // no overlap => identically zero
        if (z.zbar < cu || z.zunder > cb) {
            CHECK(p.eta == Catch::Approx(0.0).margin(1e-300));
        }
    }
}

TEST_CASE("riemann transforms") {
    const RiemannPair z1 = to_riemann(FluidState(1.0, 0.0), law53);
    CHECK(z1.zbar == Catch::Approx(1.0));
    CHECK(z1.zunder == Catch::Approx(-1.0));

    const RiemannPair z2 = to_riemann(FluidState(0.0, 5.0), law53);
    CHECK(z2.zbar == Catch::Approx(0.0));  // vacuum normalizes u to 0
    CHECK(z2.zunder == Catch::Approx(0.0));

    const RiemannPair z3 = to_riemann(FluidState(8.0, 1.0), law53);
    CHECK(z3.zbar == Catch::Approx(3.0).epsilon(1e-13));
    CHECK(z3.zunder == Catch::Approx(-1.0).epsilon(1e-13));

    const FluidState w1 = from_riemann({1.0, -1.0}, law53);
    CHECK(w1.rho == Catch::Approx(1.0));
    CHECK(w1.u == Catch::Approx(0.0).margin(1e-15));
    const FluidState w2 = from_riemann({5.0, 5.0}, law53);
    CHECK(w2.rho == 0.0);
    const FluidState w3 = from_riemann({3.0, -1.0}, law53);
    CHECK(w3.rho == Catch::Approx(8.0).epsilon(1e-12));
    CHECK(w3.u == Catch::Approx(1.0));
    CHECK_THROWS_AS(from_riemann({-1.0, 1.0}, law53), InvalidOrdering);

    // round trip on z_bar >= z_under
    UniformRng rng(26);
    for (int t = 0; t < 300; ++t) {
        const GasLaw law(rng.uniform(1.05, 2.95));
        const FluidState w(rng.uniform(1e-6, 9.0), rng.uniform(-9.0, 9.0));
        const FluidState back = from_riemann(to_riemann(w, law), law);
        CHECK(back.rho == Catch::Approx(w.rho).epsilon(1e-12));
        CHECK(back.u == Catch::Approx(w.u).margin(1e-12));
    }
}

TEST_CASE("weight W") {
    CHECK(weight_W({2.0, 2.0}, law53) == Catch::Approx(1.0));
    CHECK(weight_W({1.0, -1.0}, law53) == Catch::Approx(2.0));
    CHECK(weight_W({3.0, -1.0}, law53) == Catch::Approx(257.0).epsilon(1e-12));
}

TEST_CASE("truncated quadratic weight is convex and kinked") {
    const EntropyWeight psiR = EntropyWeight::truncated_quadratic(1.5);
    CHECK(psiR(1.0) == 0.0);
    CHECK(psiR(2.0) == Catch::Approx(2.0 * (4.0 - 2.25)));
    CHECK(psiR.convex());
    CHECK(psiR.kinks().size() == 2);
    CHECK_FALSE(EntropyWeight::flux_s_abs().convex());
}
