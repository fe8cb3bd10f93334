#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eulergeom/common.hpp"
#include "eulergeom/kernels.hpp"
#include "eulergeom/measure.hpp"

namespace eulergeom {

// <chi(s)> = Σ w_k chi(s | a_k); the vacuum mass contributes nothing.
inline double average_chi(const DiscreteYoungMeasure& nu, double s, const GasLaw& law) {
    double sum = 0.0;
    for (const auto& a : nu.atoms) sum += a.weight * chi(s, a.state, law);
    return sum;
}

inline double average_sigma(const DiscreteYoungMeasure& nu, double s, const GasLaw& law) {
    double sum = 0.0;
    for (const auto& a : nu.atoms) sum += a.weight * sigma(s, a.state, law);
    return sum;
}

// Tartar commutation residual
//   <chi(s) sigma(s') - sigma(s) chi(s')> - <chi(s)><sigma(s')> + <sigma(s)><chi(s')>,
// evaluated exactly over the atoms.
inline double commutator_residual(const DiscreteYoungMeasure& nu, double s, double sp,
                                  const GasLaw& law) {
    double joint = 0.0, cs = 0.0, ss = 0.0, csp = 0.0, ssp = 0.0;
    for (const auto& a : nu.atoms) {
        const double c1 = chi(s, a.state, law), g1 = sigma(s, a.state, law);
        const double c2 = chi(sp, a.state, law), g2 = sigma(sp, a.state, law);
        joint += a.weight * (c1 * g2 - g1 * c2);
        cs += a.weight * c1;
        ss += a.weight * g1;
        csp += a.weight * c2;
        ssp += a.weight * g2;
    }
    return joint - cs * ssp + ss * csp;
}

struct SupportInterval {
    bool empty = true;
    double zunder = 0.0;
    double zbar = 0.0;
    bool connected = true;
    std::vector<std::pair<double, double>> components;  // detected on the scan grid
};

// S = { s : <chi(s)> > tol } on a sample grid; components, hull, and the
// consistency check against the union of per-atom intervals.
inline SupportInterval support_interval(const DiscreteYoungMeasure& nu, const GasLaw& law,
                                        int grid_points = 2001) {
    SupportInterval out;
    if (nu.atoms.empty()) return out;

    double lo = 1e300, hi = -1e300, max_val = 0.0;
    for (const auto& a : nu.atoms) {
        const auto sup = kernel_support(a.state, law);
        lo = std::min(lo, sup[0]);
        hi = std::max(hi, sup[1]);
        max_val = std::max(max_val, law.c_norm * std::pow(a.state.rho, 2.0 * law.theta * law.lambda));
    }
    lo -= 1.0;
    hi += 1.0;
    const double tol = 1e-10 * max_val;

    const double h = (hi - lo) / (grid_points - 1);
    bool inside = false;
    double comp_start = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double s = lo + i * h;
        const bool pos = average_chi(nu, s, law) > tol;
        if (pos && !inside) {
            comp_start = s;
            inside = true;
        } else if (!pos && inside) {
            out.components.push_back({comp_start, lo + (i - 1) * h});
            inside = false;
        }
    }
    if (inside) out.components.push_back({comp_start, hi});
    if (out.components.empty()) return out;

    out.empty = false;
    out.zunder = out.components.front().first;
    out.zbar = out.components.back().second;
    out.connected = out.components.size() == 1;
    return out;
}

enum class ReductionVerdict { AdmissibleDiracOrVacuum, Violates };

struct ReductionCheck {
    ReductionVerdict verdict;
    double residual_sup = 0.0;
    double noise_floor = 0.0;
    bool disconnected_support = false;
};

// Desk-scale reduction dichotomy: a measure is flagged as Violates when the
// commutation residual rises above 100x the Dirac rounding baseline (or its
// kernel support splits into several components).
inline ReductionCheck reduction_check(const DiscreteYoungMeasure& nu, const GasLaw& law,
                                      int scan_points = 101) {
    nu.validate();
    ReductionCheck out{ReductionVerdict::AdmissibleDiracOrVacuum, 0.0, 0.0, false};
    if (nu.atoms.empty()) return out;

    double lo = 1e300, hi = -1e300, scale = 0.0;
    for (const auto& a : nu.atoms) {
        const auto sup = kernel_support(a.state, law);
        lo = std::min(lo, sup[0]);
        hi = std::max(hi, sup[1]);
        const double peak = law.c_norm * std::pow(a.state.rho, 2.0 * law.theta * law.lambda);
        const double speed = std::fabs(a.state.u) + std::pow(a.state.rho, law.theta);
        scale = std::max(scale, peak * peak * (1.0 + speed));
    }
    lo -= 1.0;
    hi += 1.0;
    out.noise_floor = 1e-14 * std::max(1.0, scale);

    const double h = (hi - lo) / (scan_points - 1);
    for (int i = 0; i < scan_points; ++i) {
        for (int j = i + 1; j < scan_points; ++j) {
            const double r = std::fabs(commutator_residual(nu, lo + i * h, lo + j * h, law));
            out.residual_sup = std::max(out.residual_sup, r);
        }
    }

    const SupportInterval sup = support_interval(nu, law);
    out.disconnected_support = !sup.empty && !sup.connected;

    if (out.residual_sup > 100.0 * out.noise_floor || out.disconnected_support)
        out.verdict = ReductionVerdict::Violates;
    return out;
}

// <sigma(s')>/<chi(s')> - <sigma(s)>/<chi(s)>, the connectedness functional.
inline double ratio_monotonicity_probe(const DiscreteYoungMeasure& nu, const GasLaw& law, double s,
                                       double sp, double tol = 1e-12) {
    const double cs = average_chi(nu, s, law);
    const double csp = average_chi(nu, sp, law);
    if (cs <= tol || csp <= tol)
        throw DivisionDomain("ratio_monotonicity_probe: <chi> below tolerance");
    return average_sigma(nu, sp, law) / csp - average_sigma(nu, s, law) / cs;
}

// Columnar text format: one `weight rho u` row per atom, optional `vacuum w`.
inline DiscreteYoungMeasure read_measure(std::istream& in) {
    DiscreteYoungMeasure nu;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;
        if (first == "vacuum") {
            if (!(ss >> nu.vacuum_weight))
                throw ConfigError("measure file: bad vacuum row at line " + std::to_string(lineno));
            continue;
        }
        double w, rho, u;
        try {
            w = std::stod(first);
        } catch (...) {
            throw ConfigError("measure file: bad weight at line " + std::to_string(lineno));
        }
        if (!(ss >> rho >> u))
            throw ConfigError("measure file: expected `weight rho u` at line " +
                              std::to_string(lineno));
        if (rho < 0.0) throw ConfigError("measure file: negative density at line " +
                                         std::to_string(lineno));
        nu.atoms.push_back({FluidState(rho, u), w});
    }
    nu.validate();
    return nu;
}

inline DiscreteYoungMeasure read_measure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("measure file: cannot open " + path);
    return read_measure(in);
}

}  // namespace eulergeom
