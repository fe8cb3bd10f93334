#pragma once

#include <cmath>

#include "eulergeom/common.hpp"
#include "eulergeom/special_functions.hpp"

namespace eulergeom {

// Polytropic gas: P = kappa rho^gamma with kappa = theta^2/gamma, theta = (gamma-1)/2.
// c_norm normalizes the entropy kernel so that its s-moments reproduce the
// conserved fields exactly (reciprocal of ∫(1-t^2)^lambda dt).
struct GasLaw {
    double gamma;
    double theta;
    double lambda;
    double kappa;
    double c_norm;

    explicit GasLaw(double gamma_) : gamma(gamma_) {
        if (!(gamma > 1.0 && gamma < 3.0)) throw DomainError("GasLaw: gamma must lie in (1,3)");
        theta = 0.5 * (gamma - 1.0);
        lambda = (3.0 - gamma) / (2.0 * (gamma - 1.0));
        kappa = theta * theta / gamma;
        c_norm = 1.0 / kernel_profile_integral(lambda);
    }

    double pressure(double rho) const { return kappa * std::pow(rho, gamma); }
    double internal_energy(double rho) const { return kappa / (gamma - 1.0) * std::pow(rho, gamma); }
    // Q = U'(rho) rho = U + P
    double energy_flux_potential(double rho) const {
        return kappa * gamma / (gamma - 1.0) * std::pow(rho, gamma);
    }
    double sound_speed(double rho) const { return theta * std::pow(rho, theta); }
};

struct FluidState {
    double rho = 0.0;
    double u = 0.0;

    FluidState() = default;
    FluidState(double rho_, double u_) : rho(rho_), u(u_) {
        if (rho < 0.0) throw DomainError("FluidState: negative density");
        if (rho == 0.0) u = 0.0;  // vacuum does not distinguish velocities
    }

    bool vacuum() const { return rho == 0.0; }
};

struct RiemannPair {
    double zbar = 0.0;
    double zunder = 0.0;
};

inline RiemannPair to_riemann(const FluidState& w, const GasLaw& law) {
    const double c = std::pow(w.rho, law.theta);
    return {w.u + c, w.u - c};
}

inline FluidState from_riemann(const RiemannPair& z, const GasLaw& law) {
    if (z.zbar < z.zunder) throw InvalidOrdering("from_riemann: zbar < zunder");
    const double half = 0.5 * (z.zbar - z.zunder);
    const double rho = half == 0.0 ? 0.0 : std::pow(half, 1.0 / law.theta);
    return FluidState(rho, rho == 0.0 ? 0.0 : 0.5 * (z.zbar + z.zunder));
}

// W(a) = 1 + rho(a)^{gamma+1}; the Young-measure weight.
inline double weight_W(const RiemannPair& z, const GasLaw& law) {
    if (z.zbar < z.zunder) throw InvalidOrdering("weight_W: zbar < zunder");
    const double half = 0.5 * (z.zbar - z.zunder);
    if (half == 0.0) return 1.0;
    const double rho = std::pow(half, 1.0 / law.theta);
    return 1.0 + std::pow(rho, law.gamma + 1.0);
}

}  // namespace eulergeom
