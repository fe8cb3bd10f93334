#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eulergeom/singular.hpp"

using namespace eulergeom;

namespace {
const GasLaw law53(5.0 / 3.0);
const TestFunction gbump = TestFunction::bump(0.0, 1.0);

std::vector<double> default_ladder() {
    std::vector<double> eps;
    for (int k = 3; k <= 9; ++k) eps.push_back(std::pow(2.0, -k));
    return eps;
}

Extrapolation ladder_limit(const SingularTerm& T, const SingularTerm& Tp, bool weighted,
                           const TestFunction& g = gbump) {
    std::vector<std::pair<double, double>> pts;
    for (double e : default_ladder())
        pts.push_back({e, weighted ? weighted_pairing(T, Tp, g, e) : phi_eps_pairing(T, Tp, g, e)});
    return eps_extrapolate(pts);
}

double sup_ladder(const SingularTerm& T, const SingularTerm& Tp, bool weighted) {
    double sup = 0.0;
    for (double e : default_ladder()) {
        const double v =
            weighted ? weighted_pairing(T, Tp, gbump, e) : phi_eps_pairing(T, Tp, gbump, e);
        sup = std::max(sup, std::fabs(v));
    }
    return sup;
}

const SingularTerm delta0 = SingularTerm::dirac(0.0, 1.0);
const SingularTerm heavi0 = SingularTerm::heaviside(0.0, 1.0);
const SingularTerm pv0 = SingularTerm::pv(0.0, 1.0);
const SingularTerm ci0 = SingularTerm::cosine_int(0.0, 1.0);
const SingularTerm reg0 = SingularTerm::regular(
    [](double s) { return std::cos(2.0 * s) * std::exp(-0.25 * s * s); }, 1.0);
}  // namespace

TEST_CASE("mollifier pair normalization and Z") {
    MollifierPair mol;
    // unit mass of both bumps
    const double m1 = integrate_gl([&](double x) { return mol.phi(x); }, 0.0, 1.0, 48);
    const double m2 = integrate_gl([&](double x) { return mol.phi_prime(x); }, -1.0, 0.0, 48);
    CHECK(m1 == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(m2 == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(mol.Z_quadrature() == Catch::Approx(1.0).epsilon(1e-10));
    CHECK(MollifierPair::Z == 1.0);
}

namespace {

// Oracle machinery: the mollifier window [t - eps b, t - eps a] is located
// explicitly, so no quadrature ever has to find the narrow feature itself.
struct TraceOracle {
    const Bump& mol;
    double eps;
    double t;

    double lo() const { return t - eps * mol.b; }
    double hi() const { return t - eps * mol.a; }
    double window(double s) const { return mol((t - s) / eps) / eps; }

    // ∫ g(s) window(s) ds for smooth g
    template <typename G>
    double smooth(const G& g) const {
        return integrate_gl([&](double s) { return g(s) * window(s); }, lo(), hi(), 64);
    }

    // PV ∫ g(s) window(s) / s ds
    template <typename G>
    double pv(const G& g) const {
        const double a = lo(), b = hi();
        auto f = [&](double s) { return g(s) * window(s); };
        if (a > 1e-13 || b < -1e-13)
            return integrate_gl([&](double s) { return f(s) / s; }, a, b, 64);
        // 0 at a support edge: f vanishes quartically, no subtraction needed
        const bool edge = std::fabs(a) < 1e-13 || std::fabs(b) < 1e-13;
        const double f0 = edge ? 0.0 : g(0.0) * window(0.0);
        auto sub = [&](double s) { return (f(s) - f0) / s; };
        double total = 0.0;
        if (a < -1e-13) total += integrate_gl(sub, a, 0.0, 64);
        if (b > 1e-13) total += integrate_gl(sub, 0.0, b, 64);
        if (!edge) total += f0 * std::log(std::fabs(b / a));
        return total;
    }

    // ∫ CI(s) g(s) window(s) ds
    template <typename G>
    double ci(const G& g) const {
        const double a = lo(), b = hi();
        auto f = [&](double s) { return g(s) * window(s); };
        if (a > 1e-13 || b < -1e-13)
            return integrate_gl([&](double s) { return cosine_integral(s) * f(s); }, a, b, 64);
        // CI = gammaE + ln|s| + smooth part
        double total = integrate_gl(
            [&](double s) { return (kEulerGamma + ci_smooth_part(s)) * f(s); }, a, b, 64);
        const double f0 = f(0.0);
        auto logsub = [&](double s) { return (f(s) - f0) * std::log(std::fabs(s)); };
        total += adaptive_simpson(logsub, a, -1e-12, 1e-12) +
                 adaptive_simpson(logsub, 1e-12, b, 1e-12);
        // ∫_a^b ln|s| ds = b ln b - b + |a| ln|a| - |a| for a < 0 < b
        total += f0 * (b * std::log(std::max(b, 1e-300)) - b +
                       (-a) * std::log(std::max(-a, 1e-300)) + a);
        return total;
    }
};

}  // namespace

TEST_CASE("closed-form traces agree with direct quadrature oracles") {
    MollifierPair mol;
    for (const Bump* bump : {&mol.phi, &mol.phi_prime}) {
        for (double eps : {1.0 / 16.0, 1.0 / 128.0}) {
            for (double t : {-0.9, -0.05, -0.01, 0.0, 0.013, 0.05, 0.4, 1.2}) {
                const TraceOracle oracle{*bump, eps, t};
                auto one = [](double) { return 1.0; };
                auto lin = [&](double s) { return t - s; };

                CHECK(trace(heavi0, *bump, eps, t) ==
                      Catch::Approx(integrate_gl([&](double s) { return s >= 0 ? oracle.window(s) : 0.0; },
                                                 std::max(0.0, oracle.lo()), std::max(0.0, oracle.hi()), 64))
                          .margin(2e-8));
                CHECK(trace(pv0, *bump, eps, t) == Catch::Approx(oracle.pv(one)).margin(2e-8));
                CHECK(trace(ci0, *bump, eps, t) == Catch::Approx(oracle.ci(one)).margin(5e-7));

                CHECK(trace_weighted(heavi0, *bump, eps, t) ==
                      Catch::Approx(integrate_gl(
                                        [&](double s) { return s >= 0 ? (t - s) * oracle.window(s) : 0.0; },
                                        std::max(0.0, oracle.lo()), std::max(0.0, oracle.hi()), 64))
                          .margin(2e-8));
                CHECK(trace_weighted(pv0, *bump, eps, t) ==
                      Catch::Approx(oracle.pv(lin)).margin(2e-8));
                CHECK(trace_weighted(ci0, *bump, eps, t) ==
                      Catch::Approx(oracle.ci(lin)).margin(5e-7));
            }
        }
    }
}

TEST_CASE("part-(1) limits of the antisymmetric pairing") {
    const auto dh = ladder_limit(delta0, heavi0, false);
    CHECK(dh.limit == Catch::Approx(1.0).epsilon(0.01));  // Z g(0)

    const auto pc = ladder_limit(pv0, ci0, false);
    CHECK(pc.limit == Catch::Approx(kPi * kPi).epsilon(0.02));  // Z pi^2 g(0)
}

TEST_CASE("part-(2) combinations extrapolate to zero") {
    const std::pair<SingularTerm, SingularTerm> pairs[] = {
        {delta0, ci0}, {delta0, reg0}, {pv0, heavi0}, {pv0, reg0},
        {heavi0, ci0}, {heavi0, reg0}, {ci0, reg0}};
    for (const auto& [T, Tp] : pairs) {
        const auto ex = ladder_limit(T, Tp, false);
        CHECK(std::fabs(ex.limit) <= 10.0 * std::max(ex.uncertainty, 1e-12));
    }
    // identical operands cancel identically
    for (double e : default_ladder())
        CHECK(phi_eps_pairing(heavi0, heavi0, gbump, e) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("weighted pairings: L:ZWEI limits") {
    // (PV, delta) -> g(0)
    const auto pd = ladder_limit(pv0, delta0, true);
    CHECK(pd.limit == Catch::Approx(1.0).epsilon(0.02));

    // symmetrized {delta, PV} sum cancels
    std::vector<std::pair<double, double>> sym;
    for (double e : default_ladder())
        sym.push_back({e, weighted_pairing(pv0, delta0, gbump, e) +
                              weighted_pairing(delta0, pv0, gbump, e)});
    const auto exsym = eps_extrapolate(sym);
    CHECK(std::fabs(exsym.limit) <= 10.0 * std::max(exsym.uncertainty, 1e-10));

    // (delta, delta) vanishes for every eps
    for (double e : default_ladder())
        CHECK(weighted_pairing(delta0, delta0, gbump, e) == Catch::Approx(0.0).margin(1e-12));

    // {Q, Q} pairs vanish in the limit
    for (const auto& Q : {heavi0, ci0, reg0}) {
        const auto ex = ladder_limit(Q, Q, true);
        CHECK(std::fabs(ex.limit) <= 10.0 * std::max(ex.uncertainty, 1e-9));
    }
    // remaining table entries: {PV, PV}, {PV, Q}, {delta, Q}
    const auto pp = ladder_limit(pv0, pv0, true);
    CHECK(std::fabs(pp.limit) <= 10.0 * std::max(pp.uncertainty, 1e-9));
    for (const auto& Q : {heavi0, ci0, reg0}) {
        const auto pq = ladder_limit(pv0, Q, true);
        CHECK(std::fabs(pq.limit) <= 10.0 * std::max(pq.uncertainty, 1e-9));
        const auto dq = ladder_limit(delta0, Q, true);
        CHECK(std::fabs(dq.limit) <= 10.0 * std::max(dq.uncertainty, 1e-9));
    }
}

TEST_CASE("ladders remain uniformly bounded in eps") {
    const double b1 = sup_ladder(delta0, heavi0, false);
    CHECK(b1 <= 10.0 * 1.0 + 5.0);
    const double b2 = sup_ladder(pv0, ci0, false);
    CHECK(b2 <= 10.0 * kPi * kPi + 5.0);
    const double b3 = sup_ladder(pv0, heavi0, false);
    CHECK(b3 <= 10.0);
}

TEST_CASE("eps extrapolation") {
    std::vector<std::pair<double, double>> flat;
    for (double e : default_ladder()) flat.push_back({e, 3.25});
    const auto exf = eps_extrapolate(flat);
    CHECK(exf.limit == Catch::Approx(3.25));
    CHECK(exf.uncertainty <= 1e-12);

    std::vector<std::pair<double, double>> geo;
    for (int k = 3; k <= 9; ++k) geo.push_back({std::pow(2.0, -k), 1.0 + std::pow(2.0, -k)});
    const auto exg = eps_extrapolate(geo);
    CHECK(exg.limit == Catch::Approx(1.0).margin(1e-3));
    CHECK(exg.uncertainty <= 1e-3);

    std::vector<std::pair<double, double>> bad;
    for (int k = 3; k <= 9; ++k) bad.push_back({std::pow(2.0, -k), std::pow(5.0, k)});
    CHECK_THROWS_AS(eps_extrapolate(bad), NoConvergence);

    CHECK_THROWS_AS(eps_extrapolate({{0.5, 1.0}, {0.25, 1.0}}), DomainError);
}

TEST_CASE("reduction drive: vacuum and Dirac measures") {
    const TestFunction zeta = TestFunction::bump(0.0, 3.0);

    const ReductionIntegrals vac = reduction_drive(DiscreteYoungMeasure::vacuum(), zeta, 0.05, law53);
    CHECK(vac.lhs == 0.0);
    CHECK(vac.rhs1 == 0.0);
    CHECK(vac.rhs2 == 0.0);

    const DiscreteYoungMeasure dirac = DiscreteYoungMeasure::dirac(FluidState(1.0, 0.2));
    std::vector<std::pair<double, double>> diff, lhs;
    for (double e : default_ladder()) {
        const ReductionIntegrals ri = reduction_drive(dirac, zeta, e, law53);
        diff.push_back({e, ri.rhs1 - ri.rhs2});
        lhs.push_back({e, ri.lhs});
    }
    const auto exd = eps_extrapolate(diff);
    CHECK(std::fabs(exd.limit) <= 10.0 * std::max(exd.uncertainty, 1e-8));
    const auto exl = eps_extrapolate(lhs);
    CHECK(std::fabs(exl.limit) <= 10.0 * std::max(exl.uncertainty, 1e-8));
}

TEST_CASE("reduction drive: overlapping two-point measure is detected") {
    DiscreteYoungMeasure nu;
    nu.atoms.push_back({FluidState(1.0, 0.0), 0.5});
    nu.atoms.push_back({FluidState(1.0, 0.6), 0.5});
    const TestFunction zeta = TestFunction::bump(0.0, 3.0);

    std::vector<std::pair<double, double>> lhs;
    for (double e : default_ladder()) {
        const ReductionIntegrals ri = reduction_drive(nu, zeta, e, law53);
        lhs.push_back({e, ri.lhs});
    }
    const auto ex = eps_extrapolate(lhs);
    CHECK(ex.limit > 0.0);
    CHECK(ex.limit > 10.0 * ex.uncertainty);

    // compare against B Σ w rho^{1-theta} (<chi>(zbar) zeta(zbar) + <chi>(zunder) zeta(zunder))
    const SingularExpansion& fit = kernel_expansion(nu.atoms[0].state, law53).profile;
    const double B = law53.theta * (law53.lambda + 1.0) * law53.c_norm * law53.c_norm *
                     (fit.a1 * fit.a1 + kPi * kPi * fit.a2 * fit.a2) * MollifierPair::Z;
    double target = 0.0;
    for (const auto& a : nu.atoms) {
        const RiemannPair z = to_riemann(a.state, law53);
        double avg_zb = 0.0, avg_zu = 0.0;
        for (const auto& b : nu.atoms) {
            avg_zb += b.weight * chi(z.zbar, b.state, law53);
            avg_zu += b.weight * chi(z.zunder, b.state, law53);
        }
        target += a.weight * std::pow(a.state.rho, 1.0 - law53.theta) *
                  (avg_zb * zeta.f(z.zbar) + avg_zu * zeta.f(z.zunder));
    }
    target *= B;
    CHECK(ex.limit == Catch::Approx(target).epsilon(0.2));
}
