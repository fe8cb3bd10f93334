#pragma once

#include <cmath>
#include <vector>

#include "eulergeom/common.hpp"
#include "eulergeom/gas_law.hpp"

namespace eulergeom {

// Finite convex combination of point masses in the (rho, u) half-plane plus
// an explicit vacuum mass. Weights sum to one.
struct DiscreteYoungMeasure {
    struct Atom {
        FluidState state;
        double weight;
    };
    std::vector<Atom> atoms;
    double vacuum_weight = 0.0;

    void validate() const {
        double sum = vacuum_weight;
        if (vacuum_weight < 0.0) throw DomainError("measure: negative vacuum weight");
        for (const Atom& a : atoms) {
            if (a.weight <= 0.0) throw DomainError("measure: atom weights must be positive");
            sum += a.weight;
        }
        if (std::fabs(sum - 1.0) > 1e-12) throw DomainError("measure: weights must sum to 1");
    }

    static DiscreteYoungMeasure dirac(const FluidState& w) {
        DiscreteYoungMeasure nu;
        if (w.vacuum()) {
            nu.vacuum_weight = 1.0;
        } else {
            nu.atoms.push_back({w, 1.0});
        }
        return nu;
    }

    static DiscreteYoungMeasure vacuum() {
        DiscreteYoungMeasure nu;
        nu.vacuum_weight = 1.0;
        return nu;
    }
};

}  // namespace eulergeom
