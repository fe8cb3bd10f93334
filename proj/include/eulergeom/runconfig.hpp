#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eulergeom/common.hpp"
#include "eulergeom/gas_law.hpp"
#include "eulergeom/geometry.hpp"
#include "eulergeom/solver.hpp"

namespace eulergeom {

// Parsed and validated run configuration (JSON document with a versioned
// schema field). Cross-field constraints are enforced at load time.
struct RunConfig {
    static constexpr const char* kSchema = "eulergeom-run/1";

    double gamma = 5.0 / 3.0;
    Geometry geometry = Geometry::nozzle_constant(1.0);
    double x_left = -0.5;
    double x_right = 0.5;
    int n_cells = 400;
    std::string preset;              // sod | rest | inflow-spherical (empty when table given)
    std::string table_path;          // rows: x rho u
    int approx_index = 50;           // the truncation/mollification index n
    double t_end = 0.2;
    double cfl = 0.45;
    double snapshot_dt = 0.0;        // 0: every step
    std::vector<std::string> diagnostics;
    std::string output_dir = "out";
    std::uint64_t seed = 0;

    Grid grid() const { return Grid(x_left, x_right, n_cells); }
};

namespace detail {

inline Geometry parse_geometry(const nlohmann::json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "spherical") {
        const double alpha = j.at("alpha").get<double>();
        std::optional<int> n;
        if (j.contains("n")) n = j.at("n").get<int>();
        return Geometry::spherical(alpha, n);
    }
    if (family != "nozzle") throw ConfigError("geometry.family must be nozzle or spherical");
    const auto& prof = j.at("profile");
    const std::string kind = prof.at("kind").get<std::string>();
    if (kind == "constant") return Geometry::nozzle_constant(prof.at("value").get<double>());
    if (kind == "cosine")
        return Geometry::nozzle_cosine(prof.at("a").get<double>(), prof.at("b").get<double>(),
                                       prof.value("k", 1.0));
    if (kind == "table") {
        std::vector<double> xs = prof.at("x").get<std::vector<double>>();
        std::vector<double> as = prof.at("A").get<std::vector<double>>();
        return Geometry::nozzle_table(std::move(xs), std::move(as));
    }
    throw ConfigError("geometry.profile.kind must be constant, cosine, or table");
}

}  // namespace detail

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    RunConfig cfg;
    try {
        if (j.value("schema", "") != RunConfig::kSchema)
            throw ConfigError(std::string("config: schema must be ") + RunConfig::kSchema);
        cfg.gamma = j.at("law").at("gamma").get<double>();
        if (!(cfg.gamma > 1.0 && cfg.gamma < 3.0))
            throw ConfigError("config: law.gamma must lie in (1,3)");
        cfg.geometry = detail::parse_geometry(j.at("geometry"));
        const auto& grid = j.at("grid");
        cfg.x_left = grid.at("x_left").get<double>();
        cfg.x_right = grid.at("x_right").get<double>();
        cfg.n_cells = grid.at("n_cells").get<int>();
        if (cfg.n_cells < 4 || cfg.x_right <= cfg.x_left)
            throw ConfigError("config: grid must have n_cells >= 4 and x_right > x_left");

        const auto& init = j.at("initial");
        if (init.contains("preset")) {
            cfg.preset = init.at("preset").get<std::string>();
            if (cfg.preset != "sod" && cfg.preset != "rest" && cfg.preset != "inflow-spherical")
                throw ConfigError("config: initial.preset must be sod, rest, or inflow-spherical");
        } else if (init.contains("table")) {
            cfg.table_path = init.at("table").get<std::string>();
        } else {
            throw ConfigError("config: initial requires preset or table");
        }

        cfg.approx_index = j.value("n", 50);
        if (cfg.approx_index < 1) throw ConfigError("config: n must be >= 1");
        cfg.t_end = j.at("t_end").get<double>();
        if (cfg.t_end < 0.0) throw ConfigError("config: t_end must be >= 0");
        cfg.cfl = j.value("cfl", 0.45);
        if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0)) throw ConfigError("config: cfl must lie in (0,1)");
        cfg.snapshot_dt = j.value("snapshot_dt", 0.0);
        if (j.contains("diagnostics"))
            cfg.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
        cfg.output_dir = j.value("output_dir", "out");
        cfg.seed = j.value("seed", 0ull);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    // cross-field constraints
    if (cfg.geometry.family() == GeometryFamily::Spherical) {
        if (!cfg.geometry.regularization_n())
            throw ConfigError("config: spherical geometry requires a regularization index n");
        if (cfg.x_left < 0.0) throw ConfigError("config: spherical grid must satisfy x_left >= 0");
        if (cfg.preset == "sod" || cfg.preset == "rest")
            throw ConfigError("config: preset " + cfg.preset + " requires a nozzle geometry");
    } else if (cfg.preset == "inflow-spherical") {
        throw ConfigError("config: preset inflow-spherical requires spherical geometry");
    }
    for (const std::string& d : cfg.diagnostics) {
        static const std::vector<std::string> known = {
            "mass",      "energy",          "entropy_production", "higher_integrability",
            "h_potential", "hoelder",        "flux_bound",         "tail_energy",
            "energy_flux_moments"};
        if (std::find(known.begin(), known.end(), d) == known.end())
            throw ConfigError("config: unknown diagnostic " + d);
        if (d == "tail_energy") {
            if (cfg.geometry.family() != GeometryFamily::Nozzle ||
                cfg.geometry.area_lower_bound() != cfg.geometry.area_upper_bound())
                throw ConfigError("config: tail_energy requires a constant-area nozzle");
        }
    }
    return cfg;
}

// Initial-data presets. Tables hold rows `x rho u`.
inline InitialData make_initial_data(const RunConfig& cfg, const GasLaw& law) {
    if (!cfg.table_path.empty()) {
        std::ifstream in(cfg.table_path);
        if (!in) throw ConfigError("initial table: cannot open " + cfg.table_path);
        auto xs = std::make_shared<std::vector<double>>();
        auto rs = std::make_shared<std::vector<double>>();
        auto us = std::make_shared<std::vector<double>>();
        double x, r, u;
        while (in >> x >> r >> u) {
            if (!xs->empty() && x <= xs->back())
                throw ConfigError("initial table: abscissae must increase");
            xs->push_back(x);
            rs->push_back(r);
            us->push_back(u);
        }
        if (xs->size() < 2) throw ConfigError("initial table: need >= 2 rows");
        auto interp = [xs](const std::shared_ptr<std::vector<double>>& v, double q) {
            if (q <= xs->front() || q >= xs->back()) return 0.0;
            auto it = std::upper_bound(xs->begin(), xs->end(), q);
            const std::size_t i = static_cast<std::size_t>(it - xs->begin()) - 1;
            const double t = (q - (*xs)[i]) / ((*xs)[i + 1] - (*xs)[i]);
            return (1.0 - t) * (*v)[i] + t * (*v)[i + 1];
        };
        return InitialData::from_profiles([=](double q) { return interp(rs, q); },
                                          [=](double q) { return interp(us, q); }, cfg.geometry,
                                          law, cfg.x_left, cfg.x_right);
    }

    if (cfg.preset == "sod") {
        const double mid = 0.5 * (cfg.x_left + cfg.x_right);
        return InitialData::from_profiles(
            [mid](double x) { return x < mid ? 1.0 : 0.125; }, [](double) { return 0.0; },
            cfg.geometry, law, cfg.x_left, cfg.x_right);
    }
    if (cfg.preset == "rest") {
        return InitialData::from_profiles([](double) { return 1.0; }, [](double) { return 0.0; },
                                          cfg.geometry, law, cfg.x_left, cfg.x_right);
    }
    if (cfg.preset == "inflow-spherical") {
        const double lo = cfg.x_left, hi = cfg.x_right;
        const double c = 0.5 * (lo + hi), w = 0.25 * (hi - lo);
        auto bump = [c, w](double x) {
            const double u = (x - c) / w;
            return std::fabs(u) < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
        };
        return InitialData::from_profiles(bump, [bump](double x) { return -0.5 * bump(x); },
                                          cfg.geometry, law, cfg.x_left, cfg.x_right);
    }
    throw ConfigError("make_initial_data: no preset or table");
}

}  // namespace eulergeom
