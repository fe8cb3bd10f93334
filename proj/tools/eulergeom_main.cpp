// Command-line front end: solve (finite-volume runs with diagnostics),
// verify (module acceptance batteries), ym (Young-measure reduction checks).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eulergeom/csv.hpp"
#include "eulergeom/diagnostics.hpp"
#include "eulergeom/fraccalc.hpp"
#include "eulergeom/runconfig.hpp"
#include "eulergeom/singular.hpp"
#include "eulergeom/youngmeasure.hpp"

namespace fs = std::filesystem;
using namespace eulergeom;

namespace {

int cmd_solve(const std::string& config_path, const std::string& out_override) {
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    }
    if (!out_override.empty()) cfg.output_dir = out_override;

    try {
        const GasLaw law(cfg.gamma);
        const InitialData data = make_initial_data(cfg, law);
        GridSolution init = approximate_initial_data(data, cfg.geometry, law, cfg.approx_index,
                                                     cfg.grid());

        RunOptions opt;
        opt.t_end = cfg.t_end;
        opt.cfl = cfg.cfl;
        opt.snapshot_dt = cfg.snapshot_dt;
        const auto traj = run(init, opt);

        fs::create_directories(cfg.output_dir);
        int idx = 0;
        for (const GridSolution& s : traj) {
            char name[64];
            std::snprintf(name, sizeof(name), "snapshot_%04d.csv", idx++);
            CsvWriter w((fs::path(cfg.output_dir) / name).string(), {"x", "rho", "u"});
            for (int i = 0; i < s.grid.n_cells; ++i) {
                const double A = s.geom->area(s.grid.center(i));
                const FluidState st = s.cell_state(i, A);
                w.row({s.grid.center(i), st.rho, st.u});
            }
        }

        auto has = [&](const std::string& d) {
            return std::find(cfg.diagnostics.begin(), cfg.diagnostics.end(), d) !=
                   cfg.diagnostics.end();
        };
        const fs::path outdir(cfg.output_dir);
        if (has("mass")) {
            CsvWriter w((outdir / "mass.csv").string(), {"time", "value"},
                        "functional,total-mass,anchor,mass-conservation");
            for (const auto& s : traj) w.row({s.time, mass(s)});
        }
        if (has("energy")) {
            CsvWriter w((outdir / "energy.csv").string(), {"time", "value"},
                        "functional,total-energy,anchor,energy-dissipation");
            for (const auto& s : traj) w.row({s.time, energy(s)});
        }
        if (has("entropy_production")) {
            CsvWriter w((outdir / "entropy_production.csv").string(), {"time", "value"},
                        "functional,entropy-production-energy-weight,anchor,dissipation-budget");
            const EntropyWeight psi = EntropyWeight::energy();
            double total = 0.0;
            for (std::size_t k = 1; k < traj.size(); ++k) {
                total += entropy_residuals(traj[k - 1], traj[k], psi).production;
                w.row({traj[k].time, total});
            }
        }
        if (has("higher_integrability")) {
            const auto hi = higher_integrability(traj, cfg.t_end, data.mass, data.energy);
            CsvWriter w((outdir / "higher_integrability.csv").string(), {"time", "value", "bound"},
                        "functional,density-higher-integrability,anchor,space-time-density-bound");
            w.row({cfg.t_end, hi.functional, hi.bound});
        }
        if (has("h_potential")) {
            CsvWriter w((outdir / "h_potential.csv").string(), {"x", "h"},
                        "functional,h-potential,anchor,mass-potential");
            const auto h = h_potential(traj.back());
            for (int i = 0; i < traj.back().grid.n_cells; ++i)
                w.row({traj.back().grid.center(i), h[i]});
        }
        if (has("hoelder")) {
            const auto q = hoelder_quotients(traj, cfg.seed + 12345);
            CsvWriter w((outdir / "hoelder.csv").string(), {"time", "space_quotient", "time_quotient"},
                        "functional,h-potential-hoelder-quotients,anchor,equicontinuity");
            w.row({cfg.t_end, q.space, q.time});
        }
        if (has("flux_bound")) {
            const auto fb = flux_bound_profile(traj, cfg.t_end);
            CsvWriter w((outdir / "flux_bound.csv").string(), {"y", "Q"},
                        "functional,weighted-flux-profile,anchor,entropy-flux-bound");
            for (std::size_t i = 0; i < fb.y.size(); ++i) w.row({fb.y[i], fb.Q[i]});
        }
        if (has("tail_energy")) {
            double speed = 0.0;
            const GridSolution& s0 = traj.front();
            for (int i = 0; i < s0.grid.n_cells; ++i) {
                const FluidState st = s0.cell_state(i, s0.geom->area(s0.grid.center(i)));
                speed = std::max(speed, std::fabs(st.u) + std::pow(st.rho, law.theta));
            }
            const auto ts = tail_energy(traj, 2.0 * speed);
            CsvWriter w((outdir / "tail_energy.csv").string(), {"time", "psi_tail", "smooth_tail"},
                        "functional,tail-energy,anchor,equi-integrability-propagation");
            for (std::size_t k = 0; k < ts.time.size(); ++k)
                w.row({ts.time[k], ts.psi_tail[k], ts.smooth_tail[k]});
        }
        if (has("energy_flux_moments")) {
            const auto em = energy_flux_moments(traj, cfg.t_end);
            CsvWriter w((outdir / "energy_flux_moments.csv").string(), {"time", "cubic_moment", "pgamma_u"},
                        "functional,energy-flux-moments,anchor,energy-higher-integrability");
            w.row({cfg.t_end, em.cubic_moment, em.pgamma_u});
        }
        return 0;
    } catch (const BlowUp& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

struct VerifyRow {
    std::string check;
    std::string anchor;  // stable machine-readable check id
    double value;
    double bound;
    bool pass;
};

void print_rows(const std::vector<VerifyRow>& rows) {
    std::printf("check,anchor,value,bound,pass\n");
    for (const auto& r : rows)
        std::printf("%s,%s,%s,%s,%s\n", r.check.c_str(), r.anchor.c_str(),
                    format_double(r.value).c_str(), format_double(r.bound).c_str(),
                    r.pass ? "pass" : "FAIL");
}

std::vector<VerifyRow> verify_kernels(std::uint64_t seed) {
    std::vector<VerifyRow> rows;
    UniformRng rng(seed ? seed : 7);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const GasLaw law(rng.uniform(1.05, 2.95));
        const FluidState w(rng.uniform(0.0, 10.0), rng.uniform(-10.0, 10.0));
        const MomentMatrix target = moment_matrix(w, law);
        const EntropyPair rows0 = entropy_pair(EntropyWeight::constant(1.0), w, law);
        const EntropyPair rows1 = entropy_pair(EntropyWeight::linear(0.0, 1.0), w, law);
        const EntropyPair rows2 = entropy_pair(EntropyWeight::quadratic(0.0, 0.0, 0.5), w, law);
        const double got[3][2] = {{rows0.eta, rows0.q}, {rows1.eta, rows1.q}, {rows2.eta, rows2.q}};
        // quadrature route for the same moments
        const EntropyWeight psi_table[3] = {EntropyWeight::constant(1.0),
                                            EntropyWeight::linear(0.0, 1.0),
                                            EntropyWeight::quadratic(0.0, 0.0, 0.5)};
        for (int r = 0; r < 3; ++r) {
            EntropyPair viaq;
            if (!w.vacuum()) {
                const double tol = 1e-12 * std::max(1.0, w.rho * (1 + w.u * w.u));
                viaq.eta =
                    chi_weighted_integral([&](double s) { return psi_table[r](s); }, w, law, {}, tol);
                viaq.q = chi_weighted_integral(
                    [&](double s) { return psi_table[r](s) * (law.theta * s + (1 - law.theta) * w.u); },
                    w, law, {}, tol * (1 + std::fabs(w.u)));
            }
            for (int c = 0; c < 2; ++c) {
                const double ref = target.m[r][c];
                const double denom = std::max(std::fabs(ref), 1e-2);
                worst = std::max(worst, std::fabs((c == 0 ? viaq.eta : viaq.q) - ref) / denom);
                worst = std::max(worst, std::fabs(got[r][c] - ref) / denom);
            }
        }
    }
    rows.push_back({"kernel moment matrix (200 random states)", "kinetic-moment-identity", worst,
                    1e-8, worst <= 1e-8});

    // round trip and support checks
    UniformRng rng2(seed ? seed + 1 : 8);
    double rt = 0.0, suppbad = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const GasLaw law(rng2.uniform(1.05, 2.95));
        const FluidState w(rng2.uniform(1e-6, 8.0), rng2.uniform(-8.0, 8.0));
        const FluidState back = from_riemann(to_riemann(w, law), law);
        rt = std::max(rt, std::fabs(back.rho - w.rho) / w.rho + std::fabs(back.u - w.u));
        const auto sup = kernel_support(w, law);
        suppbad = std::max(suppbad, chi(sup[1] + 1e-12, w, law));
        suppbad = std::max(suppbad, chi(sup[0] - 1e-12, w, law));
    }
    rows.push_back({"riemann round trip", "riemann-invariants-round-trip", rt, 1e-12, rt <= 1e-12});
    rows.push_back({"kernel support sharpness", "kernel-compact-support", suppbad, 0.0,
                    suppbad == 0.0});
    return rows;
}

std::vector<VerifyRow> verify_fraccalc() {
    std::vector<VerifyRow> rows;
    const GasLaw law53(5.0 / 3.0);
    const SampledFunction f = profile_f(law53, 8.0, 1u << 17);
    const FracDResult df = frac_d(f, law53);
    const SingularExpansion fit = fit_expansion(df.value, law53);
    rows.push_back({"A1 at lambda=1", "expansion-jump-coefficient", fit.a1, 2.0,
                    std::fabs(fit.a1 - 2.0) <= 1e-3});
    rows.push_back({"A2 at lambda=1", "expansion-pv-coefficient", fit.a2, 0.0,
                    std::fabs(fit.a2) <= 1e-3});
    rows.push_back({"A3 at lambda=1", "expansion-step-coefficient", fit.a3, -2.0,
                    std::fabs(fit.a3 + 2.0) <= 1e-2});

    // Fourier identity against the Bessel closed form
    double worst = 0.0;
    std::vector<double> freqs;
    const auto spec = fourier_transform_samples(f, &freqs);
    const double nu = law53.lambda + 0.5;
    const double pref = std::pow(2.0, law53.lambda) * std::exp(std::lgamma(law53.lambda + 1.0));
    for (std::size_t k = 1; k < freqs.size(); ++k) {
        const double xi = std::fabs(freqs[k]);
        if (xi < 1e-9 || xi > 64.0) continue;
        const double ref = pref * std::pow(xi, -nu) * bessel_j(nu, xi);
        worst = std::max(worst, std::fabs(spec[k].real() - ref) + std::fabs(spec[k].imag()));
    }
    rows.push_back({"Fourier-Bessel identity (lambda=1)", "profile-fourier-transform", worst, 1e-6,
                    worst <= 1e-6});

    const double ci1 = cosine_integral(1.0);
    rows.push_back({"cosine integral at 1", "cosine-integral-value", ci1, 0.3374039229,
                    std::fabs(ci1 - 0.3374039229) <= 1e-9});
    return rows;
}

std::vector<VerifyRow> verify_singular() {
    std::vector<VerifyRow> rows;
    const TestFunction g = TestFunction::bump(0.0, 1.0);
    const std::vector<double> ladder = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128,
                                        1.0 / 256, 1.0 / 512};

    auto run_ladder = [&](const SingularTerm& T, const SingularTerm& Tp, bool weighted) {
        std::vector<std::pair<double, double>> pts;
        for (double e : ladder)
            pts.push_back({e, weighted ? weighted_pairing(T, Tp, g, e)
                                       : phi_eps_pairing(T, Tp, g, e)});
        return eps_extrapolate(pts);
    };

    const SingularTerm delta = SingularTerm::dirac(0.0, 1.0);
    const SingularTerm heavi = SingularTerm::heaviside(0.0, 1.0);
    const SingularTerm pv = SingularTerm::pv(0.0, 1.0);
    const SingularTerm ci = SingularTerm::cosine_int(0.0, 1.0);

    const auto dh = run_ladder(delta, heavi, false);
    rows.push_back({"(delta,H) -> Z g(0)", "singular-limit-delta-heaviside", dh.limit, 1.0,
                    std::fabs(dh.limit - 1.0) <= 0.01});
    const auto pc = run_ladder(pv, ci, false);
    rows.push_back({"(PV,CI) -> Z pi^2 g(0)", "singular-limit-pv-cosine", pc.limit,
                    kPi * kPi, std::fabs(pc.limit - kPi * kPi) <= 0.02 * kPi * kPi});
    const auto pd = run_ladder(pv, delta, true);
    rows.push_back({"(PV,delta) weighted -> g(0)", "weighted-limit-pv-delta", pd.limit, 1.0,
                    std::fabs(pd.limit - 1.0) <= 0.02});

    MollifierPair mol;
    const double zq = mol.Z_quadrature();
    rows.push_back({"Z quadrature equals 1", "mollifier-commutator-constant", zq, 1.0,
                    std::fabs(zq - 1.0) <= 1e-10});
    return rows;
}

std::vector<VerifyRow> verify_youngmeasure(std::uint64_t seed) {
    std::vector<VerifyRow> rows;
    const GasLaw law(5.0 / 3.0);
    UniformRng rng(seed ? seed : 99);
    double dirac_worst = 0.0;
    int violations = 0;
    for (int t = 0; t < 100; ++t) {
        const DiscreteYoungMeasure nu =
            DiscreteYoungMeasure::dirac(FluidState(rng.uniform(0.1, 3.0), rng.uniform(-2, 2)));
        const auto chk = reduction_check(nu, law);
        dirac_worst = std::max(dirac_worst, chk.residual_sup);
        if (chk.verdict != ReductionVerdict::AdmissibleDiracOrVacuum) ++violations;
    }
    rows.push_back({"dirac residual (100 random)", "commutation-dirac-baseline", dirac_worst, 1e-12,
                    dirac_worst <= 1e-12 && violations == 0});

    int caught = 0;
    for (int t = 0; t < 100; ++t) {
        DiscreteYoungMeasure nu;
        const double rho = rng.uniform(0.5, 2.0);
        const double u1 = rng.uniform(-1.0, 0.0), u2 = u1 + rng.uniform(0.1, 0.8);
        nu.atoms.push_back({FluidState(rho, u1), 0.5});
        nu.atoms.push_back({FluidState(rho, u2), 0.5});
        if (reduction_check(nu, law).verdict == ReductionVerdict::Violates) ++caught;
    }
    rows.push_back({"two-point violation detection", "commutation-two-point", double(caught), 100.0,
                    caught == 100});
    return rows;
}

std::vector<VerifyRow> verify_estimates() {
    std::vector<VerifyRow> rows;
    const GasLaw law(5.0 / 3.0);
    const Geometry geom = Geometry::nozzle_cosine(2.0, 1.0, 1.0);
    const Grid grid(0.0, 2.0 * kPi, 256);
    const InitialData data = InitialData::from_profiles([](double) { return 1.0; },
                                                        [](double) { return 0.0; }, geom, law,
                                                        0.0, 2.0 * kPi);
    GridSolution s0 = approximate_initial_data(data, geom, law, 64, grid);
    GridSolution s = s0;
    for (int k = 0; k < 200; ++k) step(s, 0.45);
    double drift = 0.0;
    for (int i = 0; i < grid.n_cells; ++i)
        drift = std::max(drift, std::fabs(s.m[i] - s0.m[i]) + std::fabs(s.p[i] - s0.p[i]));
    rows.push_back({"well-balanced rest state (200 steps)", "rest-state-exactness", drift, 1e-14,
                    drift <= 1e-14});

    const double dm = std::fabs(mass(s) - mass(s0)) / mass(s0);
    rows.push_back({"mass conservation", "mass-conservation", dm, 1e-12, dm <= 1e-12});
    return rows;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
    std::vector<VerifyRow> rows;
    if (suite == "kernels") rows = verify_kernels(seed);
    else if (suite == "fraccalc") rows = verify_fraccalc();
    else if (suite == "singular") rows = verify_singular();
    else if (suite == "youngmeasure") rows = verify_youngmeasure(seed);
    else if (suite == "estimates") rows = verify_estimates();
    else {
        std::cerr << "unknown suite: " << suite
                  << " (expected kernels|fraccalc|singular|youngmeasure|estimates)\n";
        return 3;
    }
    print_rows(rows);
    for (const auto& r : rows)
        if (!r.pass) return 1;
    return 0;
}

int cmd_ym(const std::string& measure_path, double gamma) {
    DiscreteYoungMeasure nu;
    try {
        nu = read_measure_file(measure_path);
    } catch (const std::exception& e) {
        std::cerr << "measure error: " << e.what() << "\n";
        return 3;
    }
    try {
        const GasLaw law(gamma);
        const auto sup = support_interval(nu, law);
        if (sup.empty) {
            std::printf("support: empty\n");
        } else {
            std::printf("support: (%s, %s)%s\n", format_double(sup.zunder).c_str(),
                        format_double(sup.zbar).c_str(),
                        sup.connected ? "" : " [disconnected]");
        }
        const auto chk = reduction_check(nu, law);
        std::printf("residual_sup: %s\n", format_double(chk.residual_sup).c_str());
        std::printf("verdict: %s\n", chk.verdict == ReductionVerdict::AdmissibleDiracOrVacuum
                                          ? "AdmissibleDiracOrVacuum"
                                          : "Violates");
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isentropic Euler equations with geometric source terms: solver and checks"};
    app.require_subcommand(1);

    std::string config_path, out_dir, suite, measure_path;
    double gamma = 5.0 / 3.0;
    std::uint64_t seed = 0;

    CLI::App* solve = app.add_subcommand("solve", "run the finite-volume solver");
    solve->add_option("--config", config_path, "run configuration (JSON)")->required();
    solve->add_option("--out", out_dir, "output directory (overrides config)");
    solve->add_option("--seed", seed, "rng seed for sampled diagnostics");

    CLI::App* verify = app.add_subcommand("verify", "run an acceptance battery");
    verify->add_option("--suite", suite, "kernels|fraccalc|singular|youngmeasure|estimates")
        ->required();
    verify->add_option("--seed", seed, "rng seed");

    CLI::App* ym = app.add_subcommand("ym", "analyze a discrete Young measure");
    ym->add_option("--measure", measure_path, "measure file (rows: weight rho u)")->required();
    ym->add_option("--gamma", gamma, "adiabatic coefficient");
    ym->add_option("--seed", seed, "rng seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    if (solve->parsed()) return cmd_solve(config_path, out_dir);
    if (verify->parsed()) return cmd_verify(suite, seed);
    if (ym->parsed()) return cmd_ym(measure_path, gamma);
    return 3;
}
